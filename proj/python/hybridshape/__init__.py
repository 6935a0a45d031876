# Copyright 2026 The HybridShape Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Hybrid oriented-point / indicator-grid shape reconstruction."""

from ._core import (
    HybridShapeError,
    InvalidArgument,
    NumericalError,
    TopologyError,
    __version__,
    correct_topology,
    dpsr,
    dpsr_loss_gradients,
    euler_characteristic,
    evaluate,
    make_circle,
    make_polygon_target,
    marching_cubes,
    marching_squares,
    optimize_oriented_points,
    self_intersection_ratio,
)

__all__ = [
    "HybridShapeError",
    "InvalidArgument",
    "NumericalError",
    "TopologyError",
    "__version__",
    "correct_topology",
    "dpsr",
    "dpsr_loss_gradients",
    "euler_characteristic",
    "evaluate",
    "make_circle",
    "make_polygon_target",
    "marching_cubes",
    "marching_squares",
    "optimize_oriented_points",
    "self_intersection_ratio",
]
