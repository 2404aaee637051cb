use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use dagph::dagmodel::{self, GraphFiltration, SubgraphSelector};
use dagph::parallel::Execution;
use dagph::pipelines::{
    build_parallel_graph, compare_shapes, point_cloud_filtrations, radius_scale, split_subsamples,
    subsample_persistence, PointCloud, RadiusSchedule, RunMetadata,
};
use dagph::ssss::all_pairs_rank;
use dagph::subgraph::persistence_rank;
use dagph::{with_field, Error};
use serde_json::json;

use crate::output::Outputs;
use crate::{Command, Common, PointArgs};

/// 2 for bad input, 3 for well-formed input the computation rejects.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::DisconnectedSelector | Error::NotIntervalDecomposable { .. } | Error::InstanceTooLarge(_)) => 3,
        _ => 2,
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Rank { graph, common } => rank(&graph, &common),
        Command::Subgraph { graph, subgraph: ids, common } => subgraph(&graph, ids.as_deref(), &common),
        Command::Subsample { points, point_args, sample_size, seed, common } => {
            subsample(&points, &point_args, sample_size, seed, &common)
        }
        Command::Compare { x, y, point_args, common } => compare(&x, &y, &point_args, &common),
    }
}

fn read_graph(path: &Path) -> Result<GraphFiltration> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let gf = dagmodel::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    gf.validate().with_context(|| format!("validating {}", path.display()))?;
    Ok(gf)
}

fn read_points(path: &Path) -> Result<PointCloud> {
    let file = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    PointCloud::from_csv(file).with_context(|| format!("parsing {}", path.display()))
}

fn rank(path: &Path, common: &Common) -> Result<()> {
    let gf = read_graph(path)?;
    let table = with_field!(common.field, |f| all_pairs_rank(&f, &gf, common.k, Execution::Parallel))?;
    let csv = table.to_csv();
    match &common.out {
        Some(dir) => Outputs::new().file("ranks.csv", csv).commit(dir),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn subgraph(path: &Path, ids: Option<&str>, common: &Common) -> Result<()> {
    let gf = read_graph(path)?;
    let sel = match ids {
        Some(list) => SubgraphSelector::from_ids(&gf, &list.split(',').map(str::trim).collect::<Vec<_>>())?,
        None => SubgraphSelector::whole(&gf)?,
    };
    let result = with_field!(common.field, |f| persistence_rank(&f, &gf, &sel, common.k))?;
    let selector: Vec<&str> = sel.vertices().iter().map(|&v| gf.id(v)).collect();
    let doc = json!({
        "field": result.field,
        "k": result.k,
        "selector": selector,
        "rank": result.rank,
        "family_dim": result.family_dim,
    });
    if let Some(dir) = &common.out {
        Outputs::new().file("subgraph.json", serde_json::to_string_pretty(&doc)? + "\n").commit(dir)?;
    }
    println!("{}", result.rank);
    Ok(())
}

fn schedule(args: &PointArgs) -> Result<RadiusSchedule> {
    RadiusSchedule::parse(&args.radii).with_context(|| format!("--radii {:?}", args.radii))
}

fn subsample(path: &Path, args: &PointArgs, size: Option<usize>, seed: u64, common: &Common) -> Result<()> {
    let pc = read_points(path)?;
    let schedule = schedule(args)?;
    let size = size.unwrap_or(pc.len() * 2 / 5);
    let (x, y) = split_subsamples(&pc, size, seed)?;
    let lg = build_parallel_graph(&x, &y, &schedule, args.max_dim)?;
    let (ranks, diagram) =
        with_field!(common.field, |f| subsample_persistence(&f, &lg, common.k, Execution::Parallel))?;
    let mut meta = RunMetadata::new("subsample", common.field.to_string(), common.k, args.max_dim, &schedule);
    meta.seed = Some(seed);
    meta.points = vec![pc.len(), x.len(), y.len()];
    let outputs = Outputs::new()
        .file("ranks.csv", ranks.to_csv())
        .file("diagram.csv", diagram.to_csv())
        .file("diagram_radius.csv", radius_scale(&diagram, &schedule).to_csv())
        .file("metadata.json", meta.to_json() + "\n");
    finish(outputs, common, &diagram.to_csv())
}

fn compare(x_path: &Path, y_path: &Path, args: &PointArgs, common: &Common) -> Result<()> {
    let (x, y) = (read_points(x_path)?, read_points(y_path)?);
    let schedule = schedule(args)?;
    let (complex, xf, yf) = point_cloud_filtrations(&x, &y, &schedule, args.max_dim)?;
    let cmp = with_field!(common.field, |f| compare_shapes(&f, &complex, &xf, &yf, common.k, Execution::Parallel))?;
    let mut meta = RunMetadata::new("compare", common.field.to_string(), common.k, args.max_dim, &schedule);
    meta.points = vec![x.len(), y.len()];
    meta.bottleneck_x = Some(cmp.distance_x);
    meta.bottleneck_y = Some(cmp.distance_y);
    let outputs = Outputs::new()
        .file("diagram_x.csv", cmp.diagram_x.to_csv())
        .file("diagram_y.csv", cmp.diagram_y.to_csv())
        .file("diagram_g.csv", cmp.diagram_g.to_csv())
        .file("metadata.json", meta.to_json() + "\n");
    finish(outputs, common, &format!("bottleneck X-G {} Y-G {}\n", cmp.distance_x, cmp.distance_y))
}

/// Writes to `--out` when given, otherwise prints `summary`.
fn finish(outputs: Outputs, common: &Common, summary: &str) -> Result<()> {
    match &common.out {
        Some(dir) => outputs.commit(dir),
        None => {
            print!("{summary}");
            Ok(())
        }
    }
}
