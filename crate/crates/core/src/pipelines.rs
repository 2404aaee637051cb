//! Point-cloud applications: Vietoris–Rips filtrations, the subsample
//! persistence graph and the intersection/union comparison graph.
//!
//! Coordinates and radii are exact rationals parsed from decimal text, and a
//! simplex enters at radius `r` when all its pairwise squared distances are at
//! most `4 r^2`.
//!
//! Both builders return a [`LeveledGraph`]: a graph filtration whose vertices
//! are arranged in columns indexed by level. The window `[i, j]` of such a
//! graph is the subgraph on every vertex with level in `i..=j`, and window
//! ranks are inverted into a persistence diagram on the level index.

use std::io::Read;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dagmodel::{GraphFiltration, SubgraphSelector};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gmodule::{bottleneck, diagram_from_ranks, DiagramPoint, PersistenceDiagram};
use crate::parallel::{self, Execution};
use crate::simplicial::{GlobalComplex, Simplex, SubcomplexMask};
use crate::ssss;
use crate::subgraph::{persistence_rank_prepared, InducedMaps};

/// Parses a decimal such as `-1.25`, `3`, `.5` or `2.5e-3` exactly.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let s = text.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if negative { -value } else { value })
}

/// Points with exact coordinates, all of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Vec<BigRational>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<BigRational>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if let Some(row) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::Parse {
                location: format!("row {}", row + 1),
                message: format!("expected {dim} coordinates, found {}", points[row].len()),
            });
        }
        Ok(PointCloud { dim, points })
    }

    /// One point per CSV row. A first row that is not numeric is taken as a
    /// header; rows are numbered from 1 in errors.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
        let mut points = Vec::new();
        for (n, record) in reader.records().enumerate() {
            let row = n + 1;
            let record = record.map_err(|e| Error::Parse { location: format!("row {row}"), message: e.to_string() })?;
            let parsed: Option<Vec<BigRational>> = record.iter().map(parse_decimal).collect();
            match parsed {
                Some(p) => points.push(p),
                None if row == 1 => continue,
                None => {
                    return Err(Error::Parse {
                        location: format!("row {row}"),
                        message: format!("not a decimal coordinate list: {:?}", record.iter().collect::<Vec<_>>()),
                    })
                }
            }
        }
        let cloud = Self::new(points)?;
        Ok(cloud)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|c| format!("{}", c.to_f64().unwrap_or(f64::NAN))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Points at 3-decimal precision, exactly as they would be read back.
    pub fn from_f64(points: &[Vec<f64>]) -> Self {
        let exact = points
            .iter()
            .map(|p| p.iter().map(|&c| parse_decimal(&format!("{c:.3}")).expect("finite coordinate")).collect())
            .collect();
        Self::new(exact).expect("rows of equal length")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[BigRational] {
        &self.points[i]
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> BigRational {
        self.points[i].iter().zip(&self.points[j]).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn subset(&self, indices: &[usize]) -> PointCloud {
        PointCloud { dim: self.dim, points: indices.iter().map(|&i| self.points[i].clone()).collect() }
    }

    /// Points of `self` followed by the points of `other` not already present.
    pub fn union(&self, other: &PointCloud) -> Result<PointCloud> {
        if !self.is_empty() && !other.is_empty() && self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut points = self.points.clone();
        for p in &other.points {
            if !points.contains(p) {
                points.push(p.clone());
            }
        }
        Self::new(points)
    }

    /// Position in `self` of every point of `part`.
    fn locate(&self, part: &PointCloud) -> Result<Vec<usize>> {
        part.points
            .iter()
            .enumerate()
            .map(|(row, p)| {
                self.points.iter().position(|q| q == p).ok_or_else(|| Error::Parse {
                    location: format!("row {}", row + 1),
                    message: "point is not part of the combined sample".into(),
                })
            })
            .collect()
    }
}

/// Two disjoint random subsamples of `size` points each.
pub fn split_subsamples(pc: &PointCloud, size: usize, seed: u64) -> Result<(PointCloud, PointCloud)> {
    if 2 * size > pc.len() {
        return Err(Error::InstanceTooLarge(format!("two subsamples of {size} from {} points", pc.len())));
    }
    let mut order: Vec<usize> = (0..pc.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut x = order[..size].to_vec();
    let mut y = order[size..2 * size].to_vec();
    x.sort_unstable();
    y.sort_unstable();
    Ok((pc.subset(&x), pc.subset(&y)))
}

/// Strictly increasing nonnegative radii.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusSchedule {
    radii: Vec<BigRational>,
}

impl RadiusSchedule {
    pub fn new(radii: Vec<BigRational>) -> Result<Self> {
        if radii.is_empty() || radii[0].is_negative() || radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSchedule);
        }
        Ok(RadiusSchedule { radii })
    }

    /// Comma-separated decimals.
    pub fn parse(text: &str) -> Result<Self> {
        let radii: Option<Vec<BigRational>> = text.split(',').map(parse_decimal).collect();
        Self::new(radii.ok_or(Error::InvalidSchedule)?)
    }

    /// `count` radii evenly spaced from `start` to `end`, rounded to 4 decimals.
    pub fn linear(start: f64, end: f64, count: usize) -> Result<Self> {
        let step = if count > 1 { (end - start) / (count - 1) as f64 } else { 0.0 };
        let radii: Option<Vec<BigRational>> =
            (0..count).map(|i| parse_decimal(&format!("{:.4}", start + step * i as f64))).collect();
        Self::new(radii.ok_or(Error::InvalidSchedule)?)
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn radii(&self) -> &[BigRational] {
        &self.radii
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.radii.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.as_f64().iter().map(|r| r.to_string()).collect()
    }

    /// First level whose diameter threshold admits `squared` distance.
    fn level_of(&self, squared: &BigRational) -> Option<usize> {
        let four = BigRational::from_integer(BigInt::from(4));
        let level = self.radii.partition_point(|r| &(&four * r * r) < squared);
        (level < self.radii.len()).then_some(level)
    }
}

/// Rips complexes of one point cloud at every radius of a schedule. Vertex
/// `i` of the complex is point `i`.
#[derive(Clone, Debug)]
pub struct RipsFiltration {
    complex: GlobalComplex,
    /// First level at which each simplex id is present.
    levels: Vec<usize>,
    point_count: usize,
}

impl RipsFiltration {
    #[allow(clippy::needless_range_loop)]
    pub fn new(pc: &PointCloud, schedule: &RadiusSchedule, max_dim: usize) -> Self {
        let n = pc.len();
        let mut edge_level = vec![vec![None; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let level = schedule.level_of(&pc.squared_distance(i, j));
                edge_level[i][j] = level;
                edge_level[j][i] = level;
            }
        }
        // cliques by extension with larger neighbours
        let mut found: Vec<(Vec<u32>, usize)> = (0..n).map(|i| (vec![i as u32], 0)).collect();
        let mut frontier = found.clone();
        for _ in 0..max_dim {
            let mut next = Vec::new();
            for (verts, level) in &frontier {
                let last = *verts.last().unwrap() as usize;
                for w in (last + 1)..n {
                    let joined: Option<usize> =
                        verts.iter().map(|&v| edge_level[v as usize][w]).try_fold(*level, |acc, l| l.map(|l| acc.max(l)));
                    if let Some(l) = joined {
                        let mut grown = verts.clone();
                        grown.push(w as u32);
                        next.push((grown, l));
                    }
                }
            }
            found.extend(next.iter().cloned());
            frontier = next;
        }
        found.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let levels = found.iter().map(|(_, l)| *l).collect();
        let simplices = found.into_iter().map(|(v, _)| Simplex::new(v).expect("distinct vertices")).collect();
        let complex = GlobalComplex::from_simplices(simplices).expect("cliques are face-ordered");
        RipsFiltration { complex, levels, point_count: n }
    }

    pub fn complex(&self) -> &GlobalComplex {
        &self.complex
    }

    pub fn level(&self, id: usize) -> usize {
        self.levels[id]
    }

    /// Rips complex at `level` spanned by the points flagged in `points`.
    pub fn mask(&self, level: usize, points: &[bool]) -> SubcomplexMask {
        assert_eq!(points.len(), self.point_count);
        SubcomplexMask::from_ids_unchecked((0..self.complex.len()).filter(|&id| {
            self.levels[id] <= level && self.complex.simplex(id).vertices().iter().all(|&v| points[v as usize])
        }))
    }

    /// Masks of the sub-filtration on the given point indices, one per level.
    pub fn sub_filtration(&self, levels: usize, indices: &[usize]) -> Vec<SubcomplexMask> {
        let mut flags = vec![false; self.point_count];
        for &i in indices {
            flags[i] = true;
        }
        (0..levels).map(|l| self.mask(l, &flags)).collect()
    }
}

/// Rips complex at a single radius, as the full mask of its own complex.
pub fn rips_complex(pc: &PointCloud, radius: &BigRational, max_dim: usize) -> Result<(GlobalComplex, SubcomplexMask)> {
    let schedule = RadiusSchedule::new(vec![radius.clone()])?;
    let rips = RipsFiltration::new(pc, &schedule, max_dim);
    let mask = rips.complex.full_mask();
    Ok((rips.complex, mask))
}

/// A graph filtration whose vertices sit in named columns, one per level.
#[derive(Clone, Debug)]
pub struct LeveledGraph {
    graph: GraphFiltration,
    /// `columns[c][level]` is a vertex of `graph`.
    columns: Vec<Vec<usize>>,
    names: Vec<String>,
}

impl LeveledGraph {
    /// Columns of masks with vertical inclusion edges, plus `cross` edges
    /// `(from column, to column)` at every level.
    fn build(
        complex: GlobalComplex,
        columns: Vec<(String, Vec<SubcomplexMask>)>,
        cross: &[(usize, usize)],
    ) -> Result<Self> {
        let levels = columns.first().map_or(0, |c| c.1.len());
        let mut vertices = Vec::new();
        let mut index = Vec::new();
        let mut names = Vec::new();
        for (name, masks) in columns {
            if masks.len() != levels {
                return Err(Error::DimensionMismatch(levels, masks.len()));
            }
            index.push((vertices.len()..vertices.len() + levels).collect::<Vec<_>>());
            vertices.extend(masks.into_iter().enumerate().map(|(l, m)| (format!("{name}{l}"), m)));
            names.push(name);
        }
        let mut edges = Vec::new();
        for col in &index {
            edges.extend(col.windows(2).map(|w| (w[0], w[1])));
        }
        for &(a, b) in cross {
            edges.extend((0..levels).map(|l| (index[a][l], index[b][l])));
        }
        let graph = GraphFiltration::new(complex, vertices, edges)?;
        graph.validate()?;
        Ok(LeveledGraph { graph, columns: index, names })
    }

    pub fn graph(&self) -> &GraphFiltration {
        &self.graph
    }

    pub fn levels(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, column: usize, level: usize) -> usize {
        self.columns[column][level]
    }

    /// Every vertex with level in `first..=last`.
    pub fn window(&self, first: usize, last: usize) -> Result<SubgraphSelector> {
        SubgraphSelector::new(&self.graph, self.columns.iter().flat_map(|c| c[first..=last].iter().copied()))
    }
}

/// Rips filtrations of `x`, `y` and their union over a schedule, with
/// inclusions of each subsample into the union at every level. An empty
/// subsample contributes no column.
pub fn build_parallel_graph(
    x: &PointCloud,
    y: &PointCloud,
    schedule: &RadiusSchedule,
    max_dim: usize,
) -> Result<LeveledGraph> {
    let union = x.union(y)?;
    let rips = RipsFiltration::new(&union, schedule, max_dim);
    let n = schedule.len();
    let mut columns = Vec::new();
    for (name, part) in [("X", x), ("Y", y)] {
        if !part.is_empty() {
            columns.push((name.to_string(), rips.sub_filtration(n, &union.locate(part)?)));
        }
    }
    let all: Vec<usize> = (0..union.len()).collect();
    let top = columns.len();
    columns.push(("U".to_string(), rips.sub_filtration(n, &all)));
    let cross: Vec<(usize, usize)> = (0..top).map(|c| (c, top)).collect();
    LeveledGraph::build(rips.complex, columns, &cross)
}

/// Four columns `X ∩ Y`, `X`, `Y`, `X ∪ Y` over two filtrations of one
/// complex, with edges from the intersection into each side and from each
/// side into the union.
pub fn build_comparison_graph(complex: &GlobalComplex, xf: &[SubcomplexMask], yf: &[SubcomplexMask]) -> Result<LeveledGraph> {
    if xf.len() != yf.len() {
        return Err(Error::DimensionMismatch(xf.len(), yf.len()));
    }
    for f in [xf, yf] {
        if let Some(l) = (1..f.len()).find(|&l| !f[l - 1].is_subset(&f[l])) {
            return Err(Error::NotMonotone(l));
        }
        if f.iter().any(|m| !m.is_closed(complex)) {
            return Err(Error::MaskNotClosed("comparison filtration".into()));
        }
    }
    let meet = xf.iter().zip(yf).map(|(a, b)| a.intersection(b)).collect();
    let join = xf.iter().zip(yf).map(|(a, b)| a.union(b)).collect();
    let columns = vec![("I".to_string(), meet), ("X".to_string(), xf.to_vec()), ("Y".to_string(), yf.to_vec()), ("U".to_string(), join)];
    LeveledGraph::build(complex.clone(), columns, &[(0, 1), (0, 2), (1, 3), (2, 3)])
}

/// Persistence ranks of every window `[i, j]` of a leveled graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowRanks {
    k: usize,
    levels: usize,
    /// Row-major upper triangle: `(i, j)` for `i <= j`.
    ranks: Vec<usize>,
}

impl WindowRanks {
    fn slot(levels: usize, i: usize, j: usize) -> usize {
        i * levels - i * (i + 1) / 2 + j
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(i <= j && j < self.levels, "window ({i}, {j}) out of range");
        self.ranks[Self::slot(self.levels, i, j)]
    }

    /// Inclusion–exclusion inversion on the level index.
    pub fn diagram(&self) -> Result<PersistenceDiagram> {
        diagram_from_ranks(self.levels, |i, j| self.get(i, j))
    }

    /// CSV with header `first,last,k,rank`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("first,last,k,rank\n");
        for i in 0..self.levels {
            for j in i..self.levels {
                out.push_str(&format!("{i},{j},{},{}\n", self.k, self.get(i, j)));
            }
        }
        out
    }
}

/// Ranks of all windows, computed independently from shared homology data.
pub fn window_ranks<F: Field>(f: &F, lg: &LeveledGraph, k: usize, exec: Execution) -> Result<WindowRanks> {
    let gf = lg.graph();
    let maps = InducedMaps::whole(f, gf, k, exec);
    let n = lg.levels();
    let windows: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let ranks = parallel::map(exec, windows, |(i, j)| {
        let sel = lg.window(i, j)?;
        persistence_rank_prepared(f, gf, &maps, &sel).map(|r| r.rank)
    });
    Ok(WindowRanks { k, levels: n, ranks: ranks.into_iter().collect::<Result<_>>()? })
}

/// Window ranks of a parallel-subsample graph and their diagram.
pub fn subsample_persistence<F: Field>(
    f: &F,
    lg: &LeveledGraph,
    k: usize,
    exec: Execution,
) -> Result<(WindowRanks, PersistenceDiagram)> {
    let ranks = window_ranks(f, lg, k, exec)?;
    let diagram = ranks.diagram()?;
    Ok((ranks, diagram))
}

/// Diagram of a single filtration from its rank invariant on the level index.
pub fn filtration_diagram<F: Field>(
    f: &F,
    complex: &GlobalComplex,
    masks: &[SubcomplexMask],
    k: usize,
    exec: Execution,
) -> Result<PersistenceDiagram> {
    let vertices = masks.iter().enumerate().map(|(l, m)| (format!("L{l}"), m.clone())).collect();
    let edges = (1..masks.len()).map(|l| (l - 1, l)).collect();
    let path = GraphFiltration::new(complex.clone(), vertices, edges)?;
    let table = ssss::all_pairs_rank(f, &path, k, exec)?;
    diagram_from_ranks(masks.len(), |i, j| table.get(i, j).unwrap_or(0))
}

/// Diagrams of two filtrations and of their comparison graph, with the
/// bottleneck distance of each filtration to the comparison.
#[derive(Clone, Debug)]
pub struct ShapeComparison {
    pub diagram_x: PersistenceDiagram,
    pub diagram_y: PersistenceDiagram,
    pub diagram_g: PersistenceDiagram,
    pub distance_x: f64,
    pub distance_y: f64,
}

pub fn compare_shapes<F: Field>(
    f: &F,
    complex: &GlobalComplex,
    xf: &[SubcomplexMask],
    yf: &[SubcomplexMask],
    k: usize,
    exec: Execution,
) -> Result<ShapeComparison> {
    let lg = build_comparison_graph(complex, xf, yf)?;
    let diagram_g = window_ranks(f, &lg, k, exec)?.diagram()?;
    let diagram_x = filtration_diagram(f, complex, xf, k, exec)?;
    let diagram_y = filtration_diagram(f, complex, yf, k, exec)?;
    Ok(ShapeComparison {
        distance_x: bottleneck(&diagram_x, &diagram_g),
        distance_y: bottleneck(&diagram_y, &diagram_g),
        diagram_x,
        diagram_y,
        diagram_g,
    })
}

/// Rips filtrations of two point clouds over one schedule, on the Rips
/// complex of their union.
pub fn point_cloud_filtrations(
    x: &PointCloud,
    y: &PointCloud,
    schedule: &RadiusSchedule,
    max_dim: usize,
) -> Result<(GlobalComplex, Vec<SubcomplexMask>, Vec<SubcomplexMask>)> {
    let union = x.union(y)?;
    let rips = RipsFiltration::new(&union, schedule, max_dim);
    let xf = rips.sub_filtration(schedule.len(), &union.locate(x)?);
    let yf = rips.sub_filtration(schedule.len(), &union.locate(y)?);
    Ok((rips.complex, xf, yf))
}

/// Moves a level-index diagram to radii: a class alive on levels `i..=j`
/// is born at `r_i` and dies at `r_{j+1}`.
pub fn radius_scale(diagram: &PersistenceDiagram, schedule: &RadiusSchedule) -> PersistenceDiagram {
    let radii = schedule.as_f64();
    PersistenceDiagram::new(diagram.points().iter().map(|p| DiagramPoint {
        birth: radii[p.birth as usize],
        death: if p.death.is_infinite() { f64::INFINITY } else { radii[p.death as usize + 1] },
        multiplicity: p.multiplicity,
    }))
}

/// Persistences, largest first, with essential classes cut off at `horizon`.
pub fn capped_persistences(diagram: &PersistenceDiagram, horizon: f64) -> Vec<f64> {
    let mut out: Vec<f64> = diagram
        .points()
        .iter()
        .flat_map(|p| std::iter::repeat_n(p.death.min(horizon) - p.birth, p.multiplicity))
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Description of a pipeline run, written next to its outputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub command: String,
    pub field: String,
    pub k: usize,
    pub max_dim: usize,
    pub radii: Vec<String>,
    pub seed: Option<u64>,
    pub points: Vec<usize>,
    pub window_family: String,
    pub essential_death: String,
    pub interval_decomposable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bottleneck_x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bottleneck_y: Option<f64>,
}

impl RunMetadata {
    pub fn new(command: &str, field: String, k: usize, max_dim: usize, schedule: &RadiusSchedule) -> Self {
        RunMetadata {
            command: command.to_string(),
            field,
            k,
            max_dim,
            radii: schedule.labels(),
            seed: None,
            points: Vec::new(),
            window_family: "all vertices with level in first..=last".to_string(),
            essential_death: "classes alive at the last level are reported with death inf".to_string(),
            interval_decomposable: true,
            bottleneck_x: None,
            bottleneck_y: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::fixtures::{annulus_sample, noisy_circle};
    use crate::simplicial::betti;
    use crate::subgraph::persistence_rank;
    use proptest::prelude::*;

    fn q(text: &str) -> BigRational {
        parse_decimal(text).unwrap()
    }

    fn cloud(rows: &[&[&str]]) -> PointCloud {
        PointCloud::new(rows.iter().map(|r| r.iter().map(|c| q(c)).collect()).collect()).unwrap()
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(q("0.1") + q("0.2"), q("0.3"));
        assert_eq!(q("-1.25"), BigRational::new((-5).into(), 4.into()));
        assert_eq!(q(".5"), q("0.5"));
        assert_eq!(q("2.5e-3"), q("0.0025"));
        assert_eq!(q("+3"), q("3"));
        for bad in ["", "-", ".", "1.2.3", "abc", "1e", "1,5"] {
            assert_eq!(parse_decimal(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn csv_points() {
        let pc = PointCloud::from_csv("x,y\n0,0\n1.5, -2\n".as_bytes()).unwrap();
        assert_eq!(pc.len(), 2);
        assert_eq!(pc.point(1), &[q("1.5"), q("-2")]);
        assert_eq!(PointCloud::from_csv(pc.to_csv().as_bytes()).unwrap(), pc);
        let err = PointCloud::from_csv("0,0\n1,x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "row 2"), "{err}");
        let err = PointCloud::from_csv("0,0\n1,2,3\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
        assert!(PointCloud::from_csv("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn schedules() {
        assert_eq!(RadiusSchedule::parse("0.1,0.2,0.35").unwrap().len(), 3);
        for bad in ["0.2,0.1", "0.1,0.1", "-1,2", "", "0.1,x"] {
            assert_eq!(RadiusSchedule::parse(bad), Err(Error::InvalidSchedule), "{bad:?}");
        }
        assert_eq!(RadiusSchedule::linear(0.0, 1.0, 5).unwrap().labels(), ["0", "0.25", "0.5", "0.75", "1"]);
    }

    #[test]
    fn rips_thresholds() {
        let pc = cloud(&[&["0", "0"], &["1", "0"], &["0", "1"]]);
        let (c, m) = rips_complex(&pc, &q("0"), 2).unwrap();
        assert_eq!((c.len(), m.len()), (3, 3));
        // the hypotenuse has length sqrt 2, so radius 0.5 gives two edges
        let (c, _) = rips_complex(&pc, &q("0.5"), 2).unwrap();
        assert_eq!(c.len(), 5);
        let (c, _) = rips_complex(&pc, &q("0.71"), 2).unwrap();
        assert_eq!(c.len(), 7);
        let (c, _) = rips_complex(&pc, &q("0.71"), 1).unwrap();
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn evenly_spaced_circle_has_one_loop() {
        let points: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 20.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let pc = PointCloud::from_f64(&points);
        // adjacent gap ~0.313, so 2r = 0.4 joins neighbours only
        let (c, m) = rips_complex(&pc, &q("0.2"), 2).unwrap();
        assert_eq!(m.count_of_dim(&c, 1), 20);
        assert_eq!(betti(&PrimeField::default_prime(), &c, &m, 1), 1);
        let (c, m) = rips_complex(&pc, &q("0.45"), 2).unwrap();
        assert_eq!(betti(&PrimeField::default_prime(), &c, &m, 1), 1);
    }

    #[test]
    fn rips_masks_are_monotone() {
        let pc = noisy_circle(3, 24, 0.1);
        let sched = RadiusSchedule::linear(0.05, 0.4, 8).unwrap();
        let rips = RipsFiltration::new(&pc, &sched, 2);
        let all = vec![true; pc.len()];
        let half: Vec<bool> = (0..pc.len()).map(|i| i % 2 == 0).collect();
        for l in 0..sched.len() {
            let m = rips.mask(l, &all);
            assert!(m.is_closed(rips.complex()));
            assert!(rips.mask(l, &half).is_subset(&m));
            if l > 0 {
                assert!(rips.mask(l - 1, &all).is_subset(&m));
            }
        }
        assert_eq!(rips.mask(sched.len() - 1, &all), rips.complex().full_mask());
    }

    #[test]
    fn parallel_graph_shapes() {
        let pc = noisy_circle(1, 12, 0.05);
        let sched = RadiusSchedule::linear(0.1, 0.5, 3).unwrap();
        let (x, y) = split_subsamples(&pc, 5, 1).unwrap();
        let lg = build_parallel_graph(&x, &y, &sched, 2).unwrap();
        assert_eq!(lg.graph().vertex_count(), 9);
        assert_eq!(lg.graph().edge_count(), 3 * 2 + 2 * 3);
        assert!(lg.graph().validate().is_ok());

        let empty = PointCloud::new(Vec::new()).unwrap();
        let lg = build_parallel_graph(&x, &empty, &sched, 2).unwrap();
        assert_eq!(lg.column_names(), ["X", "U"]);
        for l in 0..3 {
            assert_eq!(lg.graph().mask(lg.vertex(0, l)), lg.graph().mask(lg.vertex(1, l)));
        }

        let single = RadiusSchedule::parse("0.3").unwrap();
        let lg = build_parallel_graph(&x, &y, &single, 2).unwrap();
        assert_eq!((lg.levels(), lg.graph().edge_count()), (1, 2));
    }

    #[test]
    fn identical_subsamples_give_the_rank_invariant() {
        let f = PrimeField::default_prime();
        let pc = noisy_circle(5, 16, 0.1);
        let sched = RadiusSchedule::linear(0.1, 0.6, 6).unwrap();
        let lg = build_parallel_graph(&pc, &pc, &sched, 2).unwrap();
        let (ranks, diagram) = subsample_persistence(&f, &lg, 1, Execution::Parallel).unwrap();
        let rips = RipsFiltration::new(&pc, &sched, 2);
        let masks = rips.sub_filtration(sched.len(), &(0..pc.len()).collect::<Vec<_>>());
        assert_eq!(diagram, filtration_diagram(&f, rips.complex(), &masks, 1, Execution::Sequential).unwrap());
        for i in 0..sched.len() {
            let level = SubgraphSelector::new(lg.graph(), [lg.vertex(0, i), lg.vertex(1, i), lg.vertex(2, i)]).unwrap();
            assert_eq!(ranks.get(i, i), persistence_rank(&f, lg.graph(), &level, 1).unwrap().rank);
        }
    }

    #[test]
    fn window_ranks_shrink_with_the_window() {
        let f = PrimeField::default_prime();
        let pc = noisy_circle(8, 30, 0.15);
        let (x, y) = split_subsamples(&pc, 12, 8).unwrap();
        let sched = RadiusSchedule::linear(0.05, 0.6, 8).unwrap();
        let lg = build_parallel_graph(&x, &y, &sched, 2).unwrap();
        let seq = window_ranks(&f, &lg, 1, Execution::Sequential).unwrap();
        assert_eq!(seq, window_ranks(&f, &lg, 1, Execution::Parallel).unwrap());
        let n = seq.levels();
        for i in 0..n {
            for j in i..n {
                if i > 0 {
                    assert!(seq.get(i - 1, j) <= seq.get(i, j));
                }
                if j + 1 < n {
                    assert!(seq.get(i, j + 1) <= seq.get(i, j));
                }
            }
        }
        assert!(seq.to_csv().starts_with("first,last,k,rank\n0,0,1,"));
    }

    #[test]
    fn comparison_graph_columns() {
        let pc = annulus_sample(2, 14, 0.6, 1.0);
        let sched = RadiusSchedule::linear(0.1, 0.5, 4).unwrap();
        let x = pc.subset(&(0..7).collect::<Vec<_>>());
        let y = pc.subset(&(7..14).collect::<Vec<_>>());
        let (c, xf, yf) = point_cloud_filtrations(&x, &y, &sched, 2).unwrap();
        let lg = build_comparison_graph(&c, &xf, &yf).unwrap();
        assert_eq!(lg.graph().vertex_count(), 16);
        assert_eq!(lg.graph().edge_count(), 4 * 3 + 4 * 4);
        for l in 0..4 {
            assert!(lg.graph().mask(lg.vertex(0, l)).is_empty());
        }
        let mut bad = xf.clone();
        bad.swap(0, 3);
        assert_eq!(build_comparison_graph(&c, &bad, &yf).unwrap_err(), Error::NotMonotone(1));
        assert!(matches!(build_comparison_graph(&c, &xf, &yf[..2]), Err(Error::DimensionMismatch(4, 2))));
    }

    #[test]
    fn equal_filtrations_are_at_distance_zero() {
        let pc = annulus_sample(4, 18, 0.6, 1.0);
        let sched = RadiusSchedule::linear(0.1, 0.7, 7).unwrap();
        let (c, xf, _) = point_cloud_filtrations(&pc, &pc, &sched, 2).unwrap();
        let cmp = compare_shapes(&Rationals, &c, &xf, &xf, 1, Execution::Parallel).unwrap();
        assert_eq!((cmp.distance_x, cmp.distance_y), (0.0, 0.0));
        assert_eq!(cmp.diagram_g, cmp.diagram_x);
    }

    #[test]
    fn late_simplex_moves_diagrams_by_one_level() {
        // a square whose diagonal splits it into two triangles
        let c = GlobalComplex::close_under_faces([[0, 1, 2], [0, 2, 3]].map(|v| Simplex::new(v.to_vec()).unwrap()));
        let upto = |ids: &[&[u32]]| {
            SubcomplexMask::closure(&c, ids.iter().map(|v| c.id_of(&Simplex::new(v.to_vec()).unwrap()).unwrap()))
        };
        let xf = vec![
            upto(&[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]),
            upto(&[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]),
            upto(&[&[0, 1, 2], &[0, 2, 3]]),
            upto(&[&[0, 1, 2], &[0, 2, 3]]),
        ];
        let mut yf = xf.clone();
        yf[2] = upto(&[&[0, 1, 2], &[2, 3], &[0, 3]]);
        let cmp = compare_shapes(&Rationals, &c, &xf, &yf, 1, Execution::Sequential).unwrap();
        assert!(cmp.distance_x <= 1.0 && cmp.distance_y <= 1.0, "{cmp:?}");
        assert_eq!(cmp.diagram_x.len(), 1);
    }

    #[test]
    fn radius_scale_and_caps() {
        let sched = RadiusSchedule::parse("0.1,0.2,0.4").unwrap();
        let d = PersistenceDiagram::new([
            DiagramPoint { birth: 0.0, death: 1.0, multiplicity: 1 },
            DiagramPoint { birth: 1.0, death: f64::INFINITY, multiplicity: 2 },
        ]);
        let r = radius_scale(&d, &sched);
        assert_eq!((r.points()[0].birth, r.points()[0].death), (0.1, 0.4));
        assert!(r.points()[1].is_essential());
        assert_eq!(capped_persistences(&d, 3.0), vec![2.0, 2.0, 1.0]);
    }

    #[test]
    fn metadata_json() {
        let sched = RadiusSchedule::parse("0.1,0.2").unwrap();
        let mut meta = RunMetadata::new("compare", "fp:46337".into(), 1, 2, &sched);
        meta.bottleneck_x = Some(0.0);
        let v: serde_json::Value = serde_json::from_str(&meta.to_json()).unwrap();
        assert_eq!(v["radii"], serde_json::json!(["0.1", "0.2"]));
        assert_eq!(v["bottleneck_x"], 0.0);
        assert!(v.get("bottleneck_y").is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rips_grows_with_points_and_radius(seed in 0u64..1000, cut in 3usize..10) {
            let pc = noisy_circle(seed, 10, 0.2);
            let sched = RadiusSchedule::linear(0.05, 0.8, 6).unwrap();
            let rips = RipsFiltration::new(&pc, &sched, 2);
            let sub: Vec<bool> = (0..10).map(|i| i < cut).collect();
            let all = vec![true; 10];
            for l in 1..sched.len() {
                prop_assert!(rips.mask(l - 1, &sub).is_subset(&rips.mask(l, &sub)));
                prop_assert!(rips.mask(l, &sub).is_subset(&rips.mask(l, &all)));
            }
            // the sub-cloud's own Rips complex is the same subcomplex
            let own = RipsFiltration::new(&pc.subset(&(0..cut).collect::<Vec<_>>()), &sched, 2);
            prop_assert_eq!(own.mask(5, &vec![true; cut]).len(), rips.mask(5, &sub).len());
        }
    }
}
