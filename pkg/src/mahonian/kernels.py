"""Batch kernel backend, chosen at import.

The compiled extension is used when it was built; otherwise the numpy
implementations take over.  Both consume identical swap arrays, so they
produce identical samples.
"""
try:
    from . import _kernels as impl

    BACKEND = "cython"
except ImportError:  # extension not built
    from . import _pykernels as impl

    BACKEND = "numpy"

from . import _pykernels as fallback

inversion_number = impl.inversion_number
major_index = impl.major_index
shuffle = impl.shuffle
sample_stats = impl.sample_stats
