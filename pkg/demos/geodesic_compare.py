"""Geodesic distances on the 3-sphere vs its antipode-identified quotient.

Sweeping coaxial rotations, the S^3 arc climbs monotonically to pi while
the projective-space arc folds back at half-angle pi/2: the two spaces
disagree precisely where a sign flip separates a quaternion from its
antipode.
"""
import numpy as np

from s3sim import geodesic_sweep

points = geodesic_sweep(steps=36)

print("half-angle(deg)  rotation(deg)   d on S^3   d on RP^3   bar chart (RP^3)")
print("-" * 78)
for p in points[::3]:
    half_deg = np.degrees(p.half_angle)
    bar = "#" * int(round(20 * p.d_so3 / (np.pi / 2)))
    print(f"   {half_deg:7.1f}       {2 * half_deg:7.1f}      {p.d_su2:7.4f}    "
          f"{p.d_so3:7.4f}    {bar}")

print()
print("The solid S^3 curve (d_su2) is the horizontal lift of the dashed")
print("quotient curve (d_so3): they agree up to half-angle pi/2 and then the")
print("quotient wraps, d_so3 = min(d_su2, pi - d_su2).")
