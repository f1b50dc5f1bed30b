import numpy as np


def mse_loss(denoised, reference):
    """Mean squared error and its gradient with respect to denoised."""
    if denoised.shape != reference.shape:
        raise ValueError(
            f"shape mismatch: {denoised.shape} vs {reference.shape}"
        )
    diff = denoised - reference
    loss = float(np.mean(diff * diff))
    grad = (2.0 / diff.size) * diff
    return loss, grad
