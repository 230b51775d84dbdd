"""Reference results for the X-Cell .60 vehicle, used by the reproduction report.

Matrices are row-major over the state and input orders given alongside.
"""

HOVER_TRIM = {
    "T_MR": 81.616, "CT_MR": 0.002256, "Q_MR": 6.247, "CQ_MR": 0.0002228, "w_i_MR": 4.582,
    "theta0_MR": 0.1047, "T_TR": 6.8656, "CT_TR": 0.01329, "Q_TR": 0.1268, "CQ_TR": 0.001568,
    "v_i_TR": 8.693, "theta0_TR": 0.2412, "a1s": 0.0014258, "b1s": 0.0074866,
    "d_long": 0.0003395, "d_lat": 0.001783, "theta": -0.0014471, "phi": 0.077643,
}

FORWARD_VELOCITY = (16.5557, 0.7456, 0.2585)

FORWARD_TRIM = {
    "T_MR": 82.145, "CT_MR": 0.002270, "Q_MR": 4.660, "CQ_MR": 0.000166, "w_i_MR": 1.272,
    "theta0_MR": 0.0622, "T_TR": 5.1032, "CT_TR": 0.00988, "Q_TR": 0.0571, "CQ_TR": 0.000706,
    "v_i_TR": 3.336, "theta0_TR": 0.1171, "a1s": 0.00547335, "b1s": 0.00558899,
    "d_long": 0.00039302, "d_lat": 0.001613, "theta": -0.203044, "phi": 0.0790896,
}

LONG_STATES = ("u", "w", "q", "theta", "a1s")
LAT_STATES = ("v", "p", "r", "phi", "b1s")

HOVER_A_LONG = [
    [-0.0352, 0.0, 0.9953, -9.8066, -9.9532],
    [0.0, -0.096, 0.0, 0.0161, 0.0161],
    [0.0693, 0.0, -21.5235, 0.0, 102.4125],
    [0.0, 0.0, 0.997, 0.0, 0.0],
    [0.0032, 0.0, -1.0, 0.0, -10.0],
]
HOVER_B_LONG = [
    [-0.2063, -41.8033],
    [124.4615, 0.0],
    [1.1691, 903.9850],
    [0.0, 0.0],
    [0.0, 42.0],
]
HOVER_A_LAT = [
    [-0.0698, -0.9953, 0.0, 9.7771, -9.9529],
    [0.1212, -40.6551, 0.0, 0.0, 193.4487],
    [0.0708, 0.0, 0.0001, 0.0, 0.0],
    [0.0, 1.0, -0.0016, 0.0, 0.0],
    [0.0032, -1.0, 0.0, 0.0, -10.0],
]
HOVER_B_LAT = [
    [-4.7246, 41.8026],
    [-17.2186, 1707.5153],
    [125.9109, 0.0],
    [0.0, 0.0],
    [0.0, 42.0],
]
FORWARD_A_LONG = [
    [-0.2339, -0.0072, 0.7432, -9.6060],
    [-0.1422, -1.8927, 16.5294, 1.9675],
    [0.3534, -0.2983, -22.0095, 0.0],
    [0.0, 0.0, 0.9969, 0.0],
]
FORWARD_B_LONG = [
    [-1.6635, -42.0612],
    [-149.4974, 0.0],
    [37.9729, 905.2517],
    [0.0, 0.0],
    [0.0, 42.0],
]
FORWARD_A_LAT = [
    [-0.3468, -0.7485, -16.5191, 9.576],
    [-0.2366, -40.7435, 0.1335, 0.0],
    [2.5045, 0.1406, -0.976, 0.0],
    [0.0, 1.0, -0.2048, 0.0],
]
FORWARD_B_LAT = [
    [-4.8, 42.1],
    [-17.4, 1709.9],
    [127.4, 0.0],
    [0.0, 0.0],
]

# eigenvalues as (real, imag); conjugates listed once
HOVER_LONG_EIGS = [(-0.096, 0.0), (-0.0155, 0.177), (-15.8, 8.32)]
HOVER_LAT_EIGS = [(0.0454, 0.0), (0.108, 0.0), (-0.227, 0.0), (-18.9, 0.0), (-31.8, 0.0)]
FORWARD_LONG_EIGS = [(-0.116, 0.370), (-2.12, 0.0), (-21.8, 0.0)]
FORWARD_LAT_EIGS = [(-0.117, 0.0), (-0.6, 6.42), (-40.7, 0.0)]

# dominant pair of normalized eigenvector components per named mode
HOVER_LONG_MODE_CHARACTER = {
    "short period": ("a1s", "theta"),
    "phugoid": ("theta", "u"),
    "heaving": ("w",),
}
