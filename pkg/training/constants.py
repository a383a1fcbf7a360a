# constants.py
IMAGE_MODALITY = 1
TEXT_MODALITY = 2

# Block update order of one training iteration.
UPDATE_U1 = 'u1'
UPDATE_U2 = 'u2'
UPDATE_P = 'p'
UPDATE_V = 'v'
UPDATE_R = 'r'
UPDATE_B = 'b'
UPDATE_W1 = 'w1'
UPDATE_W2 = 'w2'
UPDATE_ORDER = (UPDATE_U1, UPDATE_U2, UPDATE_P, UPDATE_V, UPDATE_R, UPDATE_B, UPDATE_W1, UPDATE_W2)

# Ridge added to BB^T in the label projection step only.
P_RIDGE = 1e-6

# Slack allowed when checking that an iteration did not raise the objective.
MONOTONE_SLACK = 1e-9

ORTHOGONALITY_TOL = 1e-8
