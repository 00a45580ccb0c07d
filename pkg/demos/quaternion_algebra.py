"""Walk through the quaternion algebra: spinorial signs, the composite
rotation of two detection quaternions, and the axis that shrinks to zero
at the detection limit."""
import numpy as np

from s3sim import (composite_angle, composite_axis, composite_axis_numerator,
                   quat_from_axis_angle, quat_from_half_angle, quat_mul, spinorial_sign)
from s3sim.algebra import Z_AXIS, normalize

rng = np.random.default_rng(1)

print("A rotation by 2*pi is NOT the identity on the 3-sphere:")
print("  q(psi=0)    =", quat_from_axis_angle(Z_AXIS, 0.0))
print("  q(psi=2*pi) =", np.round(quat_from_axis_angle(Z_AXIS, 2 * np.pi), 12))
print("  q(psi->4*pi)=", np.round(quat_from_axis_angle(Z_AXIS, 4 * np.pi - 1e-9), 12))
print()

q = quat_from_half_angle(Z_AXIS, 0.6)
print("Winding a quaternion by kappa half-turns flips its sign (-1)^kappa:")
for kappa in range(4):
    print(f"  kappa={kappa}:", np.round(spinorial_sign(q, kappa), 6))
print()

print("The product of Alice's and Bob's detection quaternions is again a")
print("point of the 3-sphere, with half-angle and axis given in closed form")
print("by the four unit vectors alone:")
a, s1, s2, b = (normalize(rng.standard_normal(3)) for _ in range(4))
eta1 = np.arccos(a @ s1)
eta2 = np.arccos(s2 @ b)
q1 = quat_from_half_angle(normalize(np.cross(a, s1)), eta1)
q2 = quat_from_half_angle(normalize(np.cross(s2, b)), eta2)
eta_uv = float(composite_angle(a, s1, s2, b))
r0 = composite_axis(a, s1, s2, b, eta_uv)
print("  direct product q1*q2   =", np.round(quat_mul(q1, q2), 9))
print("  closed form q(eta, r0) =", np.round(quat_from_half_angle(normalize(r0), eta_uv), 9))
print()

print("As the spins align with the detectors (s1 -> a, s2 -> b) the axis")
print("numerator dies off linearly -- the joint result collapses to a scalar:")
t1, t2 = (normalize(rng.standard_normal(3)) for _ in range(2))
for eps in (1e-1, 1e-2, 1e-3, 1e-4):
    s1e = normalize(a + eps * t1)
    s2e = normalize(b + eps * t2)
    norm = np.linalg.norm(composite_axis_numerator(a, s1e, s2e, b))
    print(f"  eps = {eps:7.0e}   |numerator| = {norm:.3e}")
