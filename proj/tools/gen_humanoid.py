#!/usr/bin/env python3
"""Regenerates data/humanoid24.skel.

Each body is a box at 1000 kg/m^3; box edges are scaled uniformly so the
total mass is 80 kg. Offsets approximate the SMPL mean-shape joint layout
(y up, z forward, x to the subject's left) with straight legs.
"""
import sys

DENSITY = 1000.0
TOTAL_MASS = 80.0

# name, parent, offset, box size (x, y, z), box centre in the joint frame
JOINTS = [
    ("Pelvis", "-", (0.0, 0.0, 0.0), (0.30, 0.16, 0.18), (0.0, -0.02, 0.0)),
    ("L_Hip", "Pelvis", (0.06, -0.09, 0.0), (0.13, 0.38, 0.14), (0.0, -0.19, 0.0)),
    ("R_Hip", "Pelvis", (-0.06, -0.09, 0.0), (0.13, 0.38, 0.14), (0.0, -0.19, 0.0)),
    ("Spine1", "Pelvis", (0.0, 0.11, -0.02), (0.28, 0.13, 0.17), (0.0, 0.065, 0.0)),
    ("L_Knee", "L_Hip", (0.0, -0.38, 0.0), (0.09, 0.40, 0.10), (0.0, -0.20, 0.0)),
    ("R_Knee", "R_Hip", (0.0, -0.38, 0.0), (0.09, 0.40, 0.10), (0.0, -0.20, 0.0)),
    ("Spine2", "Spine1", (0.0, 0.13, 0.0), (0.30, 0.13, 0.18), (0.0, 0.065, 0.0)),
    ("L_Ankle", "L_Knee", (0.0, -0.40, 0.0), (0.09, 0.06, 0.22), (0.0, -0.04, 0.06)),
    ("R_Ankle", "R_Knee", (0.0, -0.40, 0.0), (0.09, 0.06, 0.22), (0.0, -0.04, 0.06)),
    ("Spine3", "Spine2", (0.0, 0.05, 0.02), (0.32, 0.22, 0.18), (0.0, 0.11, 0.0)),
    ("L_Foot", "L_Ankle", (0.0, -0.05, 0.12), (0.09, 0.03, 0.06), (0.0, -0.01, 0.03)),
    ("R_Foot", "R_Ankle", (0.0, -0.05, 0.12), (0.09, 0.03, 0.06), (0.0, -0.01, 0.03)),
    ("Neck", "Spine3", (0.0, 0.22, -0.02), (0.10, 0.09, 0.10), (0.0, 0.045, 0.0)),
    ("L_Collar", "Spine3", (0.08, 0.12, -0.01), (0.08, 0.08, 0.10), (0.04, 0.04, 0.0)),
    ("R_Collar", "Spine3", (-0.08, 0.12, -0.01), (0.08, 0.08, 0.10), (-0.04, 0.04, 0.0)),
    ("Head", "Neck", (0.0, 0.09, 0.05), (0.15, 0.22, 0.19), (0.0, 0.09, 0.02)),
    ("L_Shoulder", "L_Collar", (0.12, 0.04, -0.01), (0.26, 0.09, 0.09), (0.13, 0.0, 0.0)),
    ("R_Shoulder", "R_Collar", (-0.12, 0.04, -0.01), (0.26, 0.09, 0.09), (-0.13, 0.0, 0.0)),
    ("L_Elbow", "L_Shoulder", (0.26, 0.0, 0.0), (0.25, 0.07, 0.07), (0.125, 0.0, 0.0)),
    ("R_Elbow", "R_Shoulder", (-0.26, 0.0, 0.0), (0.25, 0.07, 0.07), (-0.125, 0.0, 0.0)),
    ("L_Wrist", "L_Elbow", (0.25, 0.0, 0.0), (0.08, 0.03, 0.09), (0.04, 0.0, 0.0)),
    ("R_Wrist", "R_Elbow", (-0.25, 0.0, 0.0), (0.08, 0.03, 0.09), (-0.04, 0.0, 0.0)),
    ("L_Hand", "L_Wrist", (0.08, -0.01, 0.0), (0.08, 0.02, 0.08), (0.04, 0.0, 0.0)),
    ("R_Hand", "R_Wrist", (-0.08, -0.01, 0.0), (0.08, 0.02, 0.08), (-0.04, 0.0, 0.0)),
]


def main(out):
    raw = sum(DENSITY * sx * sy * sz for _, _, _, (sx, sy, sz), _ in JOINTS)
    edge_scale = (TOTAL_MASS / raw) ** (1.0 / 3.0)
    lines = [
        "# 24-joint SMPL-topology humanoid, boxes at 1000 kg/m^3 scaled to 80 kg.",
        "# Generated by tools/gen_humanoid.py; SI units, y up, z forward.",
        "gravity 0 -9.8 0",
    ]
    for name, parent, off, _, _ in JOINTS:
        lines.append("joint %s %s %.6f %.6f %.6f" % ((name, parent) + off))
    for name, _, _, size, centre in JOINTS:
        sx, sy, sz = (edge_scale * s for s in size)
        m = DENSITY * sx * sy * sz
        ixx = m / 12.0 * (sy * sy + sz * sz)
        iyy = m / 12.0 * (sx * sx + sz * sz)
        izz = m / 12.0 * (sx * sx + sy * sy)
        lines.append("mass %s %.12g %.6f %.6f %.6f %.12g %.12g %.12g 0 0 0"
                     % ((name, m) + centre + (ixx, iyy, izz)))
    lines.append("endpoints L_Hand R_Hand L_Foot R_Foot Pelvis")
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/humanoid24.skel")
