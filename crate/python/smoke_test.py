# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.

"""Quick end-to-end check of the graphonlab extension module."""

import math

import graphonlab as gl

edge = gl.Graph.complete(2)
tri = gl.Graph.complete(3)
c4 = gl.Graph.cycle(4)

half = gl.StepGraphon.constant(0.5)
assert abs(gl.density_step(c4, half).value - 1 / 16) < 1e-12
assert abs(gl.density_step(edge, half).value - 0.5) < 1e-12

k4 = gl.Graph.complete(4)
assert gl.hom_count(tri, k4) == 24
assert gl.density_graph(edge, k4).value == 0.75
assert gl.Graph.from_edge_list(k4.to_edge_list()) == k4

ua = gl.StepGraphon.uniform_attachment_limit(64)
assert abs(gl.density_step(edge, ua).value - 1 / 3) < 1e-12
mc = gl.density_step(tri, ua, samples=100_000, seed=7)
assert mc.method == "monte-carlo"
exact = gl.density_step(tri, ua).value
assert abs(mc.value - exact) < 5 * mc.std_error

try:
    gl.density_step(gl.Graph.complete(9), ua, work_limit=1e3)
except RuntimeError:
    pass
else:
    raise AssertionError("work limit not enforced")

single = gl.StepGraphon.pixel(gl.Graph(2, [(0, 1)]))
r = gl.cut_norm(single, half)
assert abs(r.value - 0.125) < 1e-12 and r.exact

n = 3
alt = gl.StepGraphon.pixel(gl.Graph.complete_bipartite(n, n).relabel([0, 2, 4, 1, 3, 5]))
d = gl.cut_distance(alt, gl.StepGraphon.bipartite_limit(), 2 * n)
assert d.value < 1e-12 and d.permutation is not None

g1 = gl.erdos_renyi(50, 0.3, seed=3)
assert g1 == gl.erdos_renyi(50, 0.3, seed=3)
g2 = gl.uniform_attachment(40, seed=1)
g3 = gl.w_random_graph(ua, 30, seed=2)
assert len(g2) == 40 and g3.n == 30

pgm = ua.render_pgm(16)
assert pgm.startswith(b"P5\n16 16\n255\n") and len(pgm) == len(b"P5\n16 16\n255\n") + 256
assert math.isclose(ua(0.1, 0.9), ua.weights[6][57])

print("graphonlab smoke test passed")
