"""Decompose the small 3-5-5-3 integer complex with every method and print the results."""

import numpy as np

from svdcomplex import make_special_orthogonal, svd_by_laplacian, svd_by_projection, svd_two_precision
from svdcomplex.chain_complex import exact_homology
from svdcomplex.pseudoinverse import homology_projector, pinv_exact_complex, pinv_float
from svdcomplex.samples import small_complex


def main():
    C = small_complex("QQ")
    F = C.to_float()
    print("exact homology:", exact_homology(C))
    for name, fn in (("projection", svd_by_projection), ("laplacian", svd_by_laplacian),
                     ("two-precision", svd_two_precision)):
        d = make_special_orthogonal(fn(F))
        print(f"\n[{name}] r = {d.ranks}, h = {d.homology}, residual = {d.normal_form_residual:.2e}")
        for i, s in enumerate(d.sigma, start=1):
            print(f"  Sigma_{i} = " + ", ".join(f"{x:.5g}" for x in s))
        print("  det U_i = " + ", ".join(f"{np.linalg.det(U):+.12f}" for U in d.U))

    P = pinv_exact_complex(C)
    print("\nexact A_1^+:")
    for row in P[1].row_lists():
        print("  " + "  ".join(f"{str(x):>16}" for x in row))
    print("float A_1^+ (6 significant digits):")
    with np.printoptions(formatter={"float": lambda x: f"{x:.6g}"}):
        print(pinv_float(F[1], 2))
    print("\ntraces of the homology projectors:",
          [str(sum(homology_projector(C, None, i)[j, j] for j in range(C.ranks[i]))) for i in range(4)])


if __name__ == "__main__":
    main()
