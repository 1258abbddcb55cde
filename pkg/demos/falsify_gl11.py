"""Show how a proper ideal refutes simplicity of gl(1|1) and survives a Yau twist.

Run with ``python demos/falsify_gl11.py``.
"""
from bihom import find_root_system, primary_decomposition, simplicity_report, yau_twist
from bihom.families import gl11
from bihom.linalg import format_scalar


def vecs(basis):
    return [[format_scalar(x) for x in v] for v in basis]


g = gl11()
for label, a in (("gl(1|1)", g.algebra),
                 ("twisted gl(1|1)", yau_twist(g.algebra, g.conjugation([2, 1]), g.conjugation([1, -3])))):
    d = find_root_system(a)
    prim = primary_decomposition(a, d)
    r = simplicity_report(a, d, prim=prim)
    print(label)
    print("  U =", vecs(prim.U.basis))
    for ci in prim.ideals:
        print("  class ideal", vecs(ci.I.basis), "ideal:", ci.is_ideal.ok)
    print("  verdict:", r.verdict)
    if r.witness is not None:
        print("  witness ideal:", vecs(r.witness.ideal.basis), "from seed", r.witness.seed)
