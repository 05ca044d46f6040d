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

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphonlab_core::{
    cut_distance_with, cut_norm_exact_with_threshold, cut_norm_heuristic, density_graph, density_mc,
    density_step_with_limit, pixel_graphon, render_pgm, subtract, CutConfig, CutResult, DensityEstimate,
    SampleConfig, SampleModel,
};

use crate::experiments::{self, ExperimentKind, ExperimentSpec};
use crate::{inputs, CliError};

#[derive(Debug, Parser)]
#[command(name = "graphonlab", version, about = "Graph limits toolkit: densities, cut distances, random graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homomorphism density of a pattern in a graph or graphon
    Density(DensityArgs),
    /// Cut norm of the difference of two graphons
    Cutnorm(CutnormArgs),
    /// Cut distance between two graphons over block permutations
    Cutdist(CutdistArgs),
    /// Sample a random graph in edge-list format
    Sample(SampleArgs),
    /// Convergence trace of a random graph sequence (CSV and PGM)
    Converge(ConvergeArgs),
    /// Check the 4-cycle inequality on random graphs
    Extremal(ExtremalArgs),
    /// Compare both labelings of complete bipartite graphs with their limit
    Bipartite(BipartiteArgs),
    /// Render a graphon as a binary PGM image
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DensityMethodArg {
    Exact,
    Mc,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// vertex, edge, triangle, c4, or an edge-list file
    #[arg(long)]
    pub pattern: String,
    /// Host graph (edge-list file)
    #[arg(long, conflicts_with = "graphon", required_unless_present = "graphon")]
    pub graph: Option<PathBuf>,
    /// Host graphon: constant:P, bipartite, ua-limit:M, pixel:FILE, or a graphon file
    #[arg(long)]
    pub graphon: Option<String>,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: DensityMethodArg,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Weight multiplications allowed for exact graphon densities
    #[arg(long, default_value_t = graphonlab_core::density::DEFAULT_WORK_LIMIT)]
    pub work_limit: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CutFlags {
    /// Largest block count for exact cut norms
    #[arg(long, default_value_t = 20)]
    pub exact_threshold: usize,
    /// Largest resolution for exhaustive permutation search
    #[arg(long, default_value_t = 10)]
    pub exhaustive_threshold: usize,
    /// Heuristic restarts (cut norm) or hill-climbing starts (cut distance)
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl CutFlags {
    fn config(&self) -> CutConfig {
        CutConfig {
            exact_threshold: self.exact_threshold,
            exhaustive_threshold: self.exhaustive_threshold,
            ..CutConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct CutnormArgs {
    #[arg(long)]
    pub w: String,
    #[arg(long, default_value = "constant:0")]
    pub u: String,
    #[command(flatten)]
    pub cut: CutFlags,
}

#[derive(Debug, Args)]
pub struct CutdistArgs {
    #[arg(long)]
    pub w: String,
    #[arg(long)]
    pub u: String,
    /// Common number of equal blocks
    #[arg(long)]
    pub resolution: usize,
    #[command(flatten)]
    pub cut: CutFlags,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    WRandom,
    ErdosRenyi,
    UniformAttachment,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Graphon for the w-random model
    #[arg(long)]
    pub graphon: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Er,
    Ua,
    Custom,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
    pub seeds: Vec<u64>,
    /// Edge probability for the er kind
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Graphon for the custom kind
    #[arg(long)]
    pub graphon: Option<String>,
    /// CSV output; stdout when absent
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Directory for pixel-picture snapshots
    #[arg(long)]
    pub pgm_dir: Option<PathBuf>,
    /// Snapshot image side in pixels
    #[arg(long, default_value_t = 256)]
    pub px: usize,
    /// Only snapshot these sizes (default: all)
    #[arg(long, value_delimiter = ',')]
    pub snapshot_sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub exact_threshold: usize,
    #[arg(long, default_value_t = 10)]
    pub exhaustive_threshold: usize,
    /// Hill-climbing starts for permutation search
    #[arg(long, default_value_t = 2)]
    pub restarts: usize,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sizes of G(n, 1/2) samples conditioned on edge density >= 1/2
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    pub er_sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub er_samples: usize,
}

#[derive(Debug, Args)]
pub struct BipartiteArgs {
    /// Part sizes n of K_{n,n}
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub sizes: Vec<usize>,
    #[command(flatten)]
    pub cut: CutFlags,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Graphon literal or file
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    pub graphon: Option<String>,
    /// Render the pixel picture of an edge-list file
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    pub px: usize,
    #[arg(long)]
    pub out: PathBuf,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Input(format!("write failed: {e}")))
}

fn density_report(d: &DensityEstimate) -> String {
    format!(
        "value {}\nmethod {}\nsamples {}\nstd_error {}\n",
        d.value,
        d.method.as_str(),
        d.samples,
        d.std_error
    )
}

fn cut_report(r: &CutResult) -> String {
    let mut s = format!("value {}\nexact {}\nS {:?}\nT {:?}\n", r.value, r.exact, r.s, r.t);
    if let Some(p) = &r.permutation {
        s.push_str(&format!("permutation {p:?}\n"));
    }
    s
}

fn density(args: &DensityArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let h = inputs::pattern(&args.pattern)?;
    let d = match (&args.graph, &args.graphon) {
        (Some(path), _) => density_graph(&h, &inputs::graph_file(path)?)?,
        (None, Some(spec)) => {
            let w = inputs::graphon(spec)?;
            match args.method {
                DensityMethodArg::Exact => density_step_with_limit(&h, &w, args.work_limit)?,
                DensityMethodArg::Mc => density_mc(&h, &w, args.samples, args.seed)?,
            }
        }
        (None, None) => return Err(CliError::Input("need --graph or --graphon".into())),
    };
    emit(out, &density_report(&d))
}

fn cutnorm(args: &CutnormArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let k = subtract(&inputs::graphon(&args.w)?, &inputs::graphon(&args.u)?);
    let r = if k.block_count() <= args.cut.exact_threshold {
        cut_norm_exact_with_threshold(&k, args.cut.exact_threshold)?
    } else {
        cut_norm_heuristic(&k, args.cut.restarts, args.cut.seed)?
    };
    emit(out, &cut_report(&r))
}

fn cutdist(args: &CutdistArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (w, u) = (inputs::graphon(&args.w)?, inputs::graphon(&args.u)?);
    let r = cut_distance_with(&w, &u, args.resolution, args.cut.restarts, args.cut.seed, &args.cut.config())?;
    emit(out, &cut_report(&r))
}

fn sample(args: &SampleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = match args.model {
        ModelArg::WRandom => {
            let spec = args.graphon.as_deref().ok_or_else(|| CliError::Input("w-random needs --graphon".into()))?;
            SampleModel::WRandom(inputs::graphon(spec)?)
        }
        ModelArg::ErdosRenyi => SampleModel::ErdosRenyi(args.p),
        ModelArg::UniformAttachment => SampleModel::UniformAttachment,
    };
    let g = SampleConfig { n: args.n, seed: args.seed, model }.sample()?;
    match &args.out {
        Some(path) => write_file(path, g.to_edge_list().as_bytes()),
        None => emit(out, &g.to_edge_list()),
    }
}

fn converge(args: &ConvergeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let kind = match args.kind {
        KindArg::Er => ExperimentKind::ConvergeEr { p: args.p },
        KindArg::Ua => ExperimentKind::ConvergeUa,
        KindArg::Custom => {
            let spec = args.graphon.as_deref().ok_or_else(|| CliError::Input("custom needs --graphon".into()))?;
            ExperimentKind::Custom(inputs::graphon(spec)?)
        }
    };
    let spec = ExperimentSpec {
        kind,
        sizes: args.sizes.clone(),
        seeds: args.seeds.clone(),
        cut: CutConfig {
            exact_threshold: args.exact_threshold,
            exhaustive_threshold: args.exhaustive_threshold,
            ..CutConfig::default()
        },
        budget: args.restarts,
    };
    let rows = spec.run()?;
    let text = experiments::csv(&rows);
    match &args.csv {
        Some(path) => write_file(path, text.as_bytes())?,
        None => emit(out, &text)?,
    }
    if let Some(dir) = &args.pgm_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        let tag = match args.kind {
            KindArg::Er => "er",
            KindArg::Ua => "ua",
            KindArg::Custom => "custom",
        };
        for row in rows.iter().filter(|r| args.snapshot_sizes.is_empty() || args.snapshot_sizes.contains(&r.n)) {
            let img = render_pgm(&pixel_graphon(&row.graph)?, args.px)?;
            write_file(&dir.join(format!("{tag}_n{}_seed{}.pgm", row.n, row.seed)), &img)?;
        }
    }
    Ok(())
}

fn extremal(args: &ExtremalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let report = experiments::extremal(args.trials, args.max_n, args.seed, &args.er_sizes, args.er_samples)?;
    emit(out, &report.render())?;
    if report.violations > 0 {
        return Err(CliError::Violation(format!("{} graphs violate t(C4) >= t(edge)^4", report.violations)));
    }
    Ok(())
}

fn bipartite(args: &BipartiteArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = experiments::bipartite(&args.sizes, args.cut.restarts, args.cut.seed, &args.cut.config())?;
    for r in &rows {
        emit(out, &(r.render() + "\n"))?;
    }
    if let Some(r) = rows.iter().find(|r| !r.densities_equal) {
        return Err(CliError::Violation(format!("labelings of K_{{{0},{0}}} have different densities", r.n)));
    }
    Ok(())
}

fn render(args: &RenderArgs) -> Result<(), CliError> {
    let w = match (&args.graphon, &args.graph) {
        (Some(spec), _) => inputs::graphon(spec)?,
        (None, Some(path)) => pixel_graphon(&inputs::graph_file(path)?)?,
        (None, None) => return Err(CliError::Input("need --graphon or --graph".into())),
    };
    write_file(&args.out, &render_pgm(&w, args.px)?)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Density(a) => density(a, out),
        Command::Cutnorm(a) => cutnorm(a, out),
        Command::Cutdist(a) => cutdist(a, out),
        Command::Sample(a) => sample(a, out),
        Command::Converge(a) => converge(a, out),
        Command::Extremal(a) => extremal(a, out),
        Command::Bipartite(a) => bipartite(a, out),
        Command::Render(a) => render(a),
    }
}

/// Parse arguments, run, and return the process exit code. Errors go to
/// stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("graphonlab: {e}");
            e.exit_code()
        }
    }
}
