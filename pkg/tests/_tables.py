"""Frozen reference data for the c = 0.5 benchmark families.

Root sets and energies for every branch at M = 4 and M = 15 (Delta = 0.1,
four spin values), squared norms at M = 14/15 (Delta = 1, 2S = 3), the
photon annihilation/creation matrices between those two sectors, and
coherent-state projections of the M = 15 branches.  All values are frozen
here so the suite never regenerates its own expectations.
"""
import numpy as np


def pair(re, im):
    """A conjugate pair [re + i im, re - i im]."""
    return [complex(re, im), complex(re, -im)]


# ---- M = 4, c = 0.5, Delta = 0.1; keyed [two_s][sigma], sigma ascending in energy
ROOTS_M4 = {
    1: {
        1: (pair(1.04808, 0.50837) + pair(1.29119, 1.89055), -2.32855),
        2: (pair(-0.29968, 0.40156) + pair(0.435412, 2.03959), 2.07855),
    },
    2: {
        1: (pair(1.34952, 0.426617) + pair(1.53219, 1.61769), -4.46341),
        2: (pair(0.69235, 1.44650) + [0.87876 + 0j, -0.73300 + 0j], -0.23048),
        3: (pair(-0.24857, 1.94860) + pair(-0.94836, 0.52991), 3.69389),
    },
    3: {
        1: (pair(1.57716, 0.365265) + pair(1.75801, 1.40880), -6.42034),
        2: (pair(1.16794, 1.04222) + [1.24467 + 0j, -1.11421 + 0j], -2.21633),
        3: (pair(-0.44967, 1.03001) + [-1.07433 + 0j, 0.987374 + 0j], 1.23630),
        4: (pair(-0.863032, 1.97470) + pair(-1.46216, 0.578535), 4.90038),
    },
    4: {
        1: (pair(1.75806, 0.310326) + pair(1.95484, 1.24021), -8.22579),
        2: (pair(1.53492, 0.872592) + [1.52805 + 0j, -1.55059 + 0j], -3.84729),
        3: (pair(1.31263, 0.40260) + pair(-1.34580, 0.584813), -0.733658),
        4: (pair(-1.24456, 1.27796) + [1.34077 + 0j, -1.66771 + 0j], 2.01606),
        5: (pair(-1.91737, 0.611298) + pair(-1.37797, 2.0319), 5.79068),
    },
}

# ---- M = 15, c = 0.5, Delta = 0.1; keyed [two_s][sigma], sigma ascending in energy.
# Known flaws kept verbatim: at two_s = 2 the root columns of sigma = 2 and 3 are
# interchanged relative to their energies, and one two_s = 1 root carries a typo.
ROOTS_M15 = {
    1: {
        1: (pair(2.32741, 0.35373) + pair(2.65160, 0.95304) + pair(3.05814, 1.65719)
            + pair(3.56251, 2.46349) + pair(4.18708, 3.38509) + pair(4.97493, 4.46172)
            + pair(6.03978, 5.81056) + [2.06113 + 0j], -5.46407),
        2: (pair(1.77369, 0.29777) + pair(2.02909, 0.96717) + pair(2.42613, 1.72741)
            + pair(2.94090, 2.57321) + pair(3.58330, 3.52257) + pair(4.39218, 4.61927)
            + pair(5.48081, 5.98346) + [-0.26625 + 0j], 5.21407),
    },
    2: {
        1: (pair(2.47583, 0.25997) + pair(2.80088, 0.82668) + pair(3.19618, 1.50389)
            + pair(3.68214, 2.28867) + pair(4.28484, 3.19415) + pair(5.04901, 4.25894)
            + pair(6.08796, 5.59900) + [2.09262 + 0j], -10.84627),
        2: (pair(1.53627, 0.81020) + pair(1.91551, 1.62851) + pair(2.42662, 2.50233)
            + pair(3.06813, 3.46791) + pair(3.87683, 4.57537) + pair(4.96549, 5.94766)
            + [-0.49871 + 0j, -0.03260 + 0j, 1.37064 + 0j], -0.13668),
        3: (pair(1.97376, 0.21989) + pair(2.22842, 0.80799) + pair(2.59330, 1.52768)
            + pair(3.07333, 2.35255) + pair(3.68357, 3.29084) + pair(4.46259, 4.38158)
            + pair(5.52161, 5.74275) + [-0.53645 + 0j], 9.98296),
    },
    3: {
        1: (pair(2.60227, 0.16887) + pair(2.94225, 0.70956) + pair(3.33006, 1.36210)
            + pair(3.80112, 2.12504) + pair(4.38431, 3.01280) + pair(5.12606, 4.06380)
            + pair(6.13958, 5.39312) + [2.09894 + 0j], -16.15021),
        2: (pair(2.12158, 0.12831) + pair(2.41032, 0.67232) + pair(2.75830, 1.35172)
            + pair(3.21046, 2.14973) + pair(3.79058, 3.07152) + pair(4.53977, 4.15231)
            + pair(5.56837, 5.50753) + [-0.81031 + 0j], -5.38847),
        3: (pair(1.81776, 0.620933) + pair(2.11919, 1.37646) + pair(2.57249, 2.23450)
            + pair(3.17101, 3.19682) + pair(3.94428, 4.30503) + pair(5.00011, 5.67989)
            + [-0.32767 + 0j, 1.70280 + 0j, -0.74450 + 0j], 4.71966),
        4: (pair(0.92948, 0.62277) + pair(1.36896, 1.54094) + pair(1.89787, 2.44614)
            + pair(2.54698, 3.42690) + pair(3.35965, 4.54350) + pair(4.45075, 5.92223)
            + [-0.75016 + 0j, 0.16566 + 0j, -0.24192 + 0j], 14.31902),
    },
    4: {
        1: (pair(3.07694, 0.59944) + pair(3.45953, 1.22965) + pair(3.91847, 1.97124)
            + pair(4.48444, 2.84044) + pair(5.20525, 3.87615) + pair(6.19409, 5.19300)
            + [2.65482 + 0j, 2.09986 + 0j, 2.74737 + 0j], -21.37955),
        2: (pair(2.57721, 0.55029) + pair(2.91733, 1.19437) + pair(3.34863, 1.96357)
            + pair(3.90205, 2.86494) + pair(4.62248, 3.93212) + pair(5.62050, 5.27839)
            + [2.34232 + 0j, 2.11376 + 0j, -1.08752 + 0j], -10.54503),
        3: (pair(2.05222, 0.48706) + pair(2.32658, 1.16972) + pair(2.73267, 1.99229)
            + pair(3.28759, 2.94009) + pair(4.02290, 4.04295) + pair(5.04327, 5.41679)
            + [1.91606 + 0j, -0.98428 + 0j, -0.63740 + 0j], -0.42488),
        4: (pair(1.44014, 0.33464) + pair(1.61767, 1.18514) + pair(2.04960, 2.10940)
            + pair(2.64523, 3.10605) + pair(3.41865, 4.23486) + pair(4.47519, 5.62412)
            + [-0.12358 + 0j, -1.00049 + 0j, -0.480820 + 0j], 9.11188),
        5: (pair(0.20763, 0.68292) + pair(0.78426, 1.50981) + pair(1.35724, 2.41891)
            + pair(2.02265, 3.40599) + pair(2.84301, 4.52717) + pair(3.93844, 5.90929)
            + [-0.30978 + 0j, -1.00065 + 0j, -0.43368 + 0j], 18.23759),
    },
}

# ---- c = 0.5, Delta = 1.0, 2S = 3, M = 14 and 15; keyed [sigma], sigma DESCENDING
# in energy; entries (roots, energy, norm_sq)
FAMILY_M14 = {
    1: ([-0.239824 + 0j, -0.750262 + 0j, 0.167747 + 0j, 1.773790 + 0j]
        + pair(3.79826, 4.18216) + pair(2.42263, 2.01687) + pair(1.97772, 1.03823)
        + pair(3.02276, 3.03848) + pair(4.85600, 5.58194), 14.3938, 1.32807e22),
    2: ([-0.73831 + 0j, -0.36595 + 0j] + pair(3.12892, 1.92248) + pair(2.73671, 1.07169)
        + pair(2.51242, 0.33328) + pair(3.67873, 2.88682) + pair(4.41173, 4.00060)
        + pair(5.43090, 5.38255), 4.80544, 1.05391e25),
    3: ([2.84973 + 0j, -0.830452 + 0j] + pair(5.01624, 3.90016) + pair(3.33298, 1.1325)
        + pair(6.01243, 5.25218) + pair(3.02186, 0.475188) + pair(4.29896, 2.82574)
        + pair(3.75156, 1.91465), -5.38734, 4.49629e27),
    4: ([3.01453 + 0j, 3.25013 + 0j] + pair(3.87231, 1.18878) + pair(5.60129, 3.85293)
        + pair(4.3222, 1.93711) + pair(3.50608, 0.553672) + pair(4.88324, 2.81231)
        + pair(6.58851, 5.17388), -16.3119, 2.0875e30),
}

FAMILY_M15 = {
    1: ([-0.750193 + 0j, -0.241867 + 0j, 0.176368 + 0j] + pair(2.81293, 2.33351)
        + pair(3.44429, 3.33488) + pair(4.24773, 4.46706) + pair(2.32525, 1.40143)
        + pair(5.33330, 5.85846) + pair(2.01400, 0.47729), 15.2107, 1.11114e25),
    2: ([-0.740738 + 0j, -0.353435 + 0j, 2.59874 + 0j] + pair(2.72731, 0.62846)
        + pair(3.48714, 2.22083) + pair(3.03737, 1.37210) + pair(4.84837, 4.28762)
        + pair(5.90050, 5.66355) + pair(4.07992, 3.17973), 5.0842, 9.91835e27),
    3: ([-0.823073 + 0j] + pair(2.98833, 0.15896) + pair(4.10289, 2.18817)
        + pair(3.63948, 1.39331) + pair(6.47453, 5.53095) + pair(4.69008, 3.10476)
        + pair(3.27731, 0.71051) + pair(5.44343, 4.1804), -5.65903, 4.9616e30),
    4: ([2.99698 + 0j] + pair(4.67624, 2.19107) + pair(3.44765, 0.216031)
        + pair(4.19098, 1.42675) + pair(3.78925, 0.767612) + pair(5.27176, 3.07648)
        + pair(6.02349, 4.12297) + pair(7.04506, 5.44649), -17.1358, 2.71893e33),
}

# ---- coherent projections (f_15, g_15) per sigma for the FAMILY_M15 branches;
# tabulated without a stated alpha, reproduced here against alpha = sqrt(20)
COHERENT_PROJ_M15 = {
    1: (-3.54225e9, -5.71661e11),
    2: (1.88059e12, 1.31435e13),
    3: (-4.84651e14, -1.47409e14),
    4: (8.58641e16, 1.09485e15),
}

# ---- photon annihilation matrix <M=14, sigma| a |M=15, sigma'> (rows sigma
# over the 14-root branches, cols sigma' over the 15-root ones), minus-row
# sign convention
DOWN_M15 = np.array([
    [-1.45983e24, 3.73937e23, -6.08001e22, 7.89756e21],
    [1.65728e24, -1.19478e27, 2.30675e26, -2.99671e25],
    [-2.81049e23, 1.28274e27, -5.40508e29, 8.05698e28],
    [3.75925e22, -1.71635e26, 5.62494e29, -2.6862e32],
])

# ---- photon creation matrix <M=15, sigma'| a^dag |M=14, sigma>, same sign
# convention and the SAME index layout as DOWN_M15: rows run over the 14-root
# branches (here the ket), columns over the 15-root ones (the bra)
UP_M15 = np.array([
    [-1.26067e24, 7.45656e24, -2.78592e25, 8.63194e25],
    [6.8671e22, -1.14315e27, 5.07159e27, -1.57159e28],
    [-5.57847e20, 5.87913e25, -5.69246e29, 2.02405e30],
    [3.41326e18, -3.59844e23, 2.70989e28, -3.0869e32],
])
