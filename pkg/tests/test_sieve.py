from __future__ import annotations

import random
from fractions import Fraction

import pytest

from sigmaseries.divisors import is_prime, least_prime_factor
from sigmaseriess_guard import *  # noqa: F401,F403  (placeholder removed below)
