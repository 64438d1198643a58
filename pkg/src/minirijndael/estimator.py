"""scikit-learn compatible wrapper: the cipher as an invertible transformer.

``transform`` encrypts every entry of an integer array, ``inverse_transform``
decrypts. Fitting only validates parameters and derives round keys; the data
passed to ``fit`` is checked for range but otherwise ignored.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import CipherInstance
from .params import ParamSet, get_builtin, load_paramset_file


class MiniRijndaelTransformer(TransformerMixin, BaseEstimator):
    """Elementwise ECB encryption of integer blocks.

    Parameters
    ----------
    cipher : {"8", "12"} or ParamSet, default="8"
        Built-in variant name or an explicit parameter set.
    key : int, default=0
        Cipher key; must fit in the block width.
    params_file : str or None
        Path to a parameter-set file; overrides ``cipher`` when given.

    Attributes
    ----------
    params_ : ParamSet
    cipher_ : CipherInstance
    roundkeys_ : tuple of int
    n_features_in_ : int
    """

    def __init__(self, cipher="8", key=0, params_file=None):
        self.cipher = cipher
        self.key = key
        self.params_file = params_file

    def _resolve_params(self) -> ParamSet:
        if self.params_file is not None:
            return load_paramset_file(self.params_file)
        if isinstance(self.cipher, ParamSet):
            return self.cipher
        return get_builtin(self.cipher)

    def _validate_blocks(self, X, params: ParamSet, reset: bool) -> np.ndarray:
        X = check_array(X, dtype=np.int64, ensure_2d=True)
        if reset:
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but {type(self).__name__} "
                f"is expecting {self.n_features_in_} features as input.")
        if X.size and (X.min() < 0 or X.max() > params.block_mask):
            raise ValueError(f"all entries must be blocks in [0, {params.block_mask}]")
        return X

    def fit(self, X, y=None):
        params = self._resolve_params()
        self._validate_blocks(X, params, reset=True)
        self.params_ = params
        self.cipher_ = CipherInstance(params, int(self.key))
        self.roundkeys_ = tuple(self.cipher_.roundkeys)
        return self

    def transform(self, X):
        check_is_fitted(self, "cipher_")
        X = self._validate_blocks(X, self.params_, reset=False)
        return self.cipher_.encrypt_array(X)

    def inverse_transform(self, X):
        check_is_fitted(self, "cipher_")
        X = self._validate_blocks(X, self.params_, reset=False)
        return self.cipher_.decrypt_array(X)

    def _more_tags(self):
        return {"requires_positive_X": True, "X_types": ["2darray"]}
