# training/__init__.py
from .hyperparams import Hyperparams, load_hyperparams
from .model import EdshModel, TrainReport
from .objective import objective, objective_terms, objective_gradients, code_step_cost, code_step_surrogate
from .steps import update_u, update_p, update_v, update_r, update_b, update_w, get_update_step
from .trainer import Trainer, init_state, train
