"""Walk through the five-dimensional example E5: roots, classes, J and diagnostics.

Run with ``python demos/e5_walkthrough.py``.
"""
from bihom import (compute_J, connection_classes, find_root_system, lambda_partition_J, load_fixture,
                   simplicity_report, validate_structure, verify_root_lemmas)
from bihom.linalg import format_scalar


def vecs(basis):
    return [[format_scalar(x) for x in v] for v in basis]


def show(label, verdict):
    extra = "" if verdict.ok else f"  witness={verdict.witness} defect={[format_scalar(x) for x in verdict.defect]}"
    print(f"  {label:<22} {verdict.ok}{extra}")


a = load_fixture("E5")
print("basis:", a.basis_names, "parity:", a.parity)

print("\nstructure checks")
for name, v in validate_structure(a).items():
    show(name, v)

d = find_root_system(a)
print("\nroots on u3 (value, even dim, odd dim):")
for values, even, odd in d.summary():
    print("  ", [format_scalar(x) for x in values], even, odd)
print("split:", d.split_ok)

lem = verify_root_lemmas(a, d)
print("\nroot lemmas")
show("phi shifts roots", lem.phi_shifts_roots)
show("psi shifts roots", lem.psi_shifts_roots)
show("bracket adds roots", lem.bracket_adds_roots)

part = connection_classes(d)
print("\nconnection classes:", [sorted(format_scalar(m[0]) for m in c.members) for c in part])
for chain in part.chains[:3]:
    print("  chain", chain.to_dict())

J = compute_J(a)
print("\nJ basis:", vecs(J.space.basis))
show("[L, J] = 0", J.annihilated_by_L)
p = lambda_partition_J(a, d)
print("roots off J:", {k: sorted(format_scalar(v[0]) for v in s) for k, s in p.lambda_notJ.items()})
print("roots on J: ", {k: sorted(format_scalar(v[0]) for v in s) for k, s in p.lambda_J.items()})

r = simplicity_report(a, d)
print("\nsimplicity:", r.verdict, r.conditions)
