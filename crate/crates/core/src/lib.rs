// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Graph limits toolkit: finite graphs, step graphons, homomorphism
//! densities, cut norms and cut distances, and random graph models.

pub mod cut;
pub mod density;
pub mod error;
pub mod graph;
pub mod graphon;
pub mod rng;
pub mod sampler;

pub use cut::{
    cut_distance, cut_distance_with, cut_norm_exact, cut_norm_exact_with_threshold, cut_norm_heuristic, cut_value,
    distance_to_constant, distance_to_constant_with, CutConfig, CutResult,
};
pub use density::{density_graph, density_mc, density_step, density_step_with_limit, DensityEstimate, DensityMethod};
pub use error::{Error, Result};
pub use graph::{hom_count, parse_edge_list, Graph};
pub use graphon::{
    bipartite_limit, common_refinement, constant_graphon, parse_graphon, pixel_graphon, render_pgm, subtract,
    uniform_attachment_limit, Kernel, StepFunction, StepGraphon,
};
pub use sampler::{erdos_renyi, uniform_attachment, w_random_graph, SampleConfig, SampleModel};
