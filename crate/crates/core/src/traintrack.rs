//! Train-track combinatorics on a general surface of type `(g, m)`.
//!
//! A track is a branched one-complex; a transverse measure is a nonnegative
//! branch weighting satisfying the switch condition (incoming mass equals
//! outgoing mass at every switch). The solution cone of the switch equations
//! charts the measured-foliation space; for a track documented as complete
//! on its surface the cone has dimension `6g - 6 + 2m`.
//!
//! Completeness of a fixture is a documented attribute, not something this
//! module verifies topologically; only its linear-algebra consequences are
//! machine-checked. The kernel basis is computed over exact rationals so
//! the switch residuals of rational data are exactly zero.

// Indexed loops mirror the row/column structure of the eliminations.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

use crate::quadrature::{uniform_open01, SeedStream};
use crate::teich::SurfaceType;
use crate::{CoreError, Result};

/// One switch: the branch ends arriving on the incoming side and leaving on
/// the outgoing side. A branch id may appear on both sides (a loop) or twice
/// on one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Switch {
    pub incoming: Vec<u32>,
    pub outgoing: Vec<u32>,
}

/// Abstract switch/branch combinatorics of a train track (or bigon track)
/// on a surface of type `(g, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainTrackGraph {
    pub surface: SurfaceType,
    pub branches: Vec<u32>,
    pub switches: Vec<Switch>,
    /// Whether bigon complementary regions are allowed for this fixture.
    pub bigon_track: bool,
}

impl TrainTrackGraph {
    pub fn new(
        surface: SurfaceType,
        branches: Vec<u32>,
        switches: Vec<Switch>,
        bigon_track: bool,
    ) -> Result<Self> {
        let track = Self {
            surface,
            branches,
            switches,
            bigon_track,
        };
        track.validate()?;
        Ok(track)
    }

    /// The standard complete bigon track on the once-punctured torus: two
    /// branches through a single switch. Its cone is the full nonnegative
    /// quadrant in the branch weights, matching the `[a, b]` model of the
    /// measured-foliation space by the identity map.
    pub fn torus_fixture() -> Self {
        Self {
            surface: SurfaceType::ONCE_PUNCTURED_TORUS,
            branches: vec![1, 2],
            switches: vec![Switch {
                incoming: vec![1, 2],
                outgoing: vec![1, 2],
            }],
            bigon_track: true,
        }
    }

    /// A single branch looping through one switch; kernel of dimension 1.
    pub fn single_loop_fixture() -> Self {
        Self {
            surface: SurfaceType::ONCE_PUNCTURED_TORUS,
            branches: vec![1],
            switches: vec![Switch {
                incoming: vec![1],
                outgoing: vec![1],
            }],
            bigon_track: true,
        }
    }

    /// Structural validation: declared ids, two ends per branch, nonempty
    /// switch sides, and a connected branch/switch incidence graph.
    pub fn validate(&self) -> Result<()> {
        if self.switches.is_empty() {
            return Err(CoreError::InvalidTrack("track has no switches".into()));
        }
        let mut declared = std::collections::BTreeSet::new();
        for id in &self.branches {
            if !declared.insert(*id) {
                return Err(CoreError::InvalidTrack(format!("duplicate branch id {id}")));
            }
        }
        let mut ends: BTreeMap<u32, usize> = self.branches.iter().map(|id| (*id, 0)).collect();
        for (k, sw) in self.switches.iter().enumerate() {
            if sw.incoming.is_empty() || sw.outgoing.is_empty() {
                return Err(CoreError::InvalidTrack(format!(
                    "switch {k} must have both incoming and outgoing branches"
                )));
            }
            for id in sw.incoming.iter().chain(sw.outgoing.iter()) {
                match ends.get_mut(id) {
                    Some(count) => *count += 1,
                    None => {
                        return Err(CoreError::InvalidTrack(format!(
                            "switch {k} references undeclared branch {id}"
                        )))
                    }
                }
            }
        }
        for (id, count) in &ends {
            if *count != 2 {
                return Err(CoreError::InvalidTrack(format!(
                    "branch {id} has {count} ends placed at switches, expected 2"
                )));
            }
        }
        self.check_connected()
    }

    fn check_connected(&self) -> Result<()> {
        // Union-find over switches, merged through shared branches.
        let n = self.switches.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
        for (k, sw) in self.switches.iter().enumerate() {
            for id in sw.incoming.iter().chain(sw.outgoing.iter()) {
                if let Some(&other) = seen.get(id) {
                    let a = find(&mut parent, k);
                    let b = find(&mut parent, other);
                    parent[a] = b;
                } else {
                    seen.insert(*id, k);
                }
            }
        }
        let root = find(&mut parent, 0);
        for k in 1..n {
            if find(&mut parent, k) != root {
                return Err(CoreError::InvalidTrack(format!(
                    "track is disconnected: switch {k} is not reachable from switch 0"
                )));
            }
        }
        Ok(())
    }

    /// The switch-condition matrix: one row per switch, one column per
    /// branch in declaration order; each incoming end contributes `+1`, each
    /// outgoing end `-1` (a branch with both ends on the same switch side
    /// accumulates). The kernel intersected with the nonnegative orthant is
    /// the transverse-measure cone.
    pub fn switch_matrix(&self) -> Result<Vec<Vec<i64>>> {
        self.validate()?;
        let col: BTreeMap<u32, usize> = self
            .branches
            .iter()
            .enumerate()
            .map(|(j, id)| (*id, j))
            .collect();
        let mut rows = Vec::with_capacity(self.switches.len());
        for sw in &self.switches {
            let mut row = vec![0i64; self.branches.len()];
            for id in &sw.incoming {
                row[col[id]] += 1;
            }
            for id in &sw.outgoing {
                row[col[id]] -= 1;
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// Dimension of the span of the solution cone: the nullity of the
    /// switch matrix, computed over exact rationals.
    pub fn cone_dimension(&self) -> Result<usize> {
        let m = self.switch_matrix()?;
        Ok(self.branches.len() - rational_rank(&m))
    }

    /// An integer basis of the switch-condition kernel, from the rational
    /// reduced echelon form with denominators cleared.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<i64>>> {
        let m = self.switch_matrix()?;
        Ok(rational_kernel_basis(&m, self.branches.len()))
    }

    /// Uniform samples from `{w in cone : 0 <= w_j <= bound}` by rejection
    /// in the kernel-basis parametrization: coefficients are drawn uniformly
    /// from the exact interval hull of the polytope's preimage.
    pub fn sample_cone(
        &self,
        bound: f64,
        n: usize,
        stream: &SeedStream,
    ) -> Result<Vec<WeightVector>> {
        let sampler = ConeSampler::new(self, bound)?;
        let mut rng = stream.rng();
        let mut out = Vec::with_capacity(n);
        let mut proposals = 0usize;
        const FLOOR: f64 = 1e-5;
        while out.len() < n {
            proposals += 1;
            if let Some(w) = sampler.propose(&mut rng) {
                out.push(w);
            }
            if proposals >= 200_000 && (out.len() as f64) < FLOOR * proposals as f64 {
                return Err(CoreError::LowAcceptance {
                    rate: out.len() as f64 / proposals as f64,
                    floor: FLOOR,
                });
            }
        }
        Ok(out)
    }

    /// Monte Carlo volume of a region of the cone box, in the kernel-basis
    /// Lebesgue measure. The region must lie inside
    /// `{w in cone : w_j <= bound}`. Returns `(volume, standard error)`.
    pub fn thurston_volume_estimate(
        &self,
        bound: f64,
        region: impl Fn(&WeightVector) -> bool,
        n: usize,
        stream: &SeedStream,
    ) -> Result<(f64, f64)> {
        let sampler = ConeSampler::new(self, bound)?;
        let mut rng = stream.rng();
        let mut hits = 0usize;
        for _ in 0..n {
            if let Some(w) = sampler.propose_in_box(&mut rng) {
                if region(&w) {
                    hits += 1;
                }
            }
        }
        let p = hits as f64 / n as f64;
        let volume = sampler.box_volume * p;
        let stderr = sampler.box_volume * (p * (1.0 - p) / n as f64).sqrt();
        Ok((volume, stderr))
    }
}

/// A transverse measure: a nonnegative weight per branch satisfying the
/// switch condition.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub weights: BTreeMap<u32, f64>,
}

impl WeightVector {
    pub fn get(&self, branch: u32) -> f64 {
        self.weights.get(&branch).copied().unwrap_or(0.0)
    }

    /// Largest switch-condition residual `|Σ in - Σ out|` over the track.
    pub fn switch_residual_max(&self, track: &TrainTrackGraph) -> f64 {
        track
            .switches
            .iter()
            .map(|sw| {
                let inc: f64 = sw.incoming.iter().map(|id| self.get(*id)).sum();
                let out: f64 = sw.outgoing.iter().map(|id| self.get(*id)).sum();
                (inc - out).abs()
            })
            .fold(0.0, f64::max)
    }
}

struct ConeSampler {
    branch_ids: Vec<u32>,
    /// Kernel basis as columns: `basis[j][i]` is the weight of branch `i`
    /// in basis vector `j`.
    basis: Vec<Vec<f64>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    bound: f64,
    box_volume: f64,
}

impl ConeSampler {
    fn new(track: &TrainTrackGraph, bound: f64) -> Result<Self> {
        assert!(bound > 0.0);
        let int_basis = track.kernel_basis()?;
        let d = int_basis.len();
        if d == 0 {
            return Err(CoreError::DegenerateCone(
                "switch matrix has full column rank; only the zero measure exists".into(),
            ));
        }
        let nb = track.branches.len();
        let basis: Vec<Vec<f64>> = int_basis
            .iter()
            .map(|v| v.iter().map(|x| *x as f64).collect())
            .collect();
        // Pseudo-inverse rows bound the coefficients: c = B^+ w and each
        // w_j ranges over [0, bound], so c_i lies in the exact interval
        // [bound · Σ_j min(P_ij, 0), bound · Σ_j max(P_ij, 0)].
        let pinv = pseudo_inverse(&basis, nb, d)?;
        let mut lo = vec![0.0; d];
        let mut hi = vec![0.0; d];
        for i in 0..d {
            for j in 0..nb {
                let p = pinv[i][j];
                if p < 0.0 {
                    lo[i] += p;
                } else {
                    hi[i] += p;
                }
            }
            lo[i] *= bound;
            hi[i] *= bound;
            if hi[i] <= lo[i] || !(hi[i] - lo[i]).is_finite() {
                return Err(CoreError::DegenerateCone(format!(
                    "coefficient interval {i} is empty"
                )));
            }
        }
        let box_volume = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        Ok(Self {
            branch_ids: track.branches.clone(),
            basis,
            lo,
            hi,
            bound,
            box_volume,
        })
    }

    fn draw(&self, rng: &mut rand_chacha::ChaCha12Rng) -> Vec<f64> {
        (0..self.basis.len())
            .map(|i| self.lo[i] + (self.hi[i] - self.lo[i]) * uniform_open01(rng))
            .collect()
    }

    fn weights_of(&self, c: &[f64]) -> Vec<f64> {
        let nb = self.branch_ids.len();
        let mut w = vec![0.0; nb];
        for (cj, col) in c.iter().zip(&self.basis) {
            for i in 0..nb {
                w[i] += cj * col[i];
            }
        }
        w
    }

    fn in_cone_box(&self, w: &[f64]) -> bool {
        w.iter().all(|x| *x >= 0.0 && *x <= self.bound)
    }

    fn to_weight_vector(&self, w: Vec<f64>) -> WeightVector {
        WeightVector {
            weights: self.branch_ids.iter().copied().zip(w).collect(),
        }
    }

    /// One rejection step for the cone box.
    fn propose(&self, rng: &mut rand_chacha::ChaCha12Rng) -> Option<WeightVector> {
        let c = self.draw(rng);
        let w = self.weights_of(&c);
        if self.in_cone_box(&w) {
            Some(self.to_weight_vector(w))
        } else {
            None
        }
    }

    /// A draw from the coefficient box regardless of cone membership, for
    /// volume estimates of arbitrary regions inside the box.
    fn propose_in_box(&self, rng: &mut rand_chacha::ChaCha12Rng) -> Option<WeightVector> {
        let c = self.draw(rng);
        Some(self.to_weight_vector(self.weights_of(&c)))
    }
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact rank over the rationals by Gaussian elimination.
pub fn rational_rank(m: &[Vec<i64>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| big(*x)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|r| !a[*r][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let inv = a[rank][col].clone();
        for c in col..cols {
            a[rank][c] = &a[rank][c] / &inv;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..cols {
                    a[r][c] = &a[r][c] - &f * &a[rank][c];
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Integer kernel basis from the rational reduced echelon form.
fn rational_kernel_basis(m: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let rows = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| big(*x)).collect())
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|r| !a[*r][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let inv = a[rank][col].clone();
        for c in 0..cols {
            a[rank][c] = &a[rank][c] / &inv;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..cols {
                    a[r][c] = &a[r][c] - &f * &a[rank][c];
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|(_, c)| *c).collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = big(1);
        for (r, c) in &pivots {
            v[*c] = -a[*r][free].clone();
        }
        // Clear denominators to land on an integer vector.
        let mut lcm = BigInt::from(1);
        for x in &v {
            let d = x.denom();
            lcm = num_integer_lcm(&lcm, d);
        }
        let ints: Vec<i64> = v
            .iter()
            .map(|x| {
                let scaled = x * BigRational::from_integer(lcm.clone());
                bigint_to_i64(scaled.numer())
            })
            .collect();
        basis.push(ints);
    }
    basis
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let g = num_integer_gcd(a, b);
    (a / &g * b).abs()
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a.is_zero() {
        BigInt::from(1)
    } else {
        a
    }
}

fn bigint_to_i64(x: &BigInt) -> i64 {
    let (sign, digits) = x.to_u64_digits();
    let mag = match digits.len() {
        0 => 0i64,
        1 => i64::try_from(digits[0]).expect("kernel basis entry fits in i64"),
        _ => panic!("kernel basis entry exceeds i64"),
    };
    match sign {
        num_bigint::Sign::Minus => -mag,
        _ => mag,
    }
}

/// Least-squares pseudo-inverse of the (full column rank) basis matrix,
/// rows indexed by coefficients: solves `(B^T B) P = B^T`.
fn pseudo_inverse(basis: &[Vec<f64>], nb: usize, d: usize) -> Result<Vec<Vec<f64>>> {
    // Gram matrix.
    let mut gram = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            gram[i][j] = (0..nb).map(|k| basis[i][k] * basis[j][k]).sum();
        }
    }
    // Right-hand side B^T (d x nb).
    let mut rhs: Vec<Vec<f64>> = (0..d).map(|i| basis[i].clone()).collect();
    // Gaussian elimination with partial pivoting on [gram | rhs].
    for col in 0..d {
        let piv = (col..d)
            .max_by(|a, b| gram[*a][col].abs().total_cmp(&gram[*b][col].abs()))
            .expect("nonempty");
        if gram[piv][col].abs() < 1e-12 {
            return Err(CoreError::DegenerateCone(
                "kernel basis is numerically rank-deficient".into(),
            ));
        }
        gram.swap(col, piv);
        rhs.swap(col, piv);
        let inv = 1.0 / gram[col][col];
        for c in col..d {
            gram[col][c] *= inv;
        }
        for c in 0..nb {
            rhs[col][c] *= inv;
        }
        for r in 0..d {
            if r != col && gram[r][col] != 0.0 {
                let f = gram[r][col];
                for c in col..d {
                    gram[r][c] -= f * gram[col][c];
                }
                for c in 0..nb {
                    rhs[r][c] -= f * rhs[col][c];
                }
            }
        }
    }
    Ok(rhs)
}

/// Parses the textual track format:
///
/// ```text
/// traintrack <g> <m>
/// branch <id>
/// switch in:<ids> out:<ids>
/// ```
///
/// Blank lines and `#` comments are skipped. Duplicate ids, undeclared ids
/// and unbalanced branch ends are rejected with line-numbered errors.
pub fn parse_track(text: &str) -> Result<TrainTrackGraph> {
    let mut surface: Option<SurfaceType> = None;
    let mut branches: Vec<u32> = Vec::new();
    let mut branch_lines: BTreeMap<u32, usize> = BTreeMap::new();
    let mut switches: Vec<Switch> = Vec::new();
    let mut end_counts: BTreeMap<u32, usize> = BTreeMap::new();

    let err = |line: usize, msg: String| CoreError::TrackParse { line, msg };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("traintrack") => {
                if surface.is_some() {
                    return Err(err(line_no, "duplicate traintrack header".into()));
                }
                let g: u32 = parts
                    .next()
                    .ok_or_else(|| err(line_no, "missing genus".into()))?
                    .parse()
                    .map_err(|_| err(line_no, "genus must be a nonnegative integer".into()))?;
                let m: u32 = parts
                    .next()
                    .ok_or_else(|| err(line_no, "missing puncture count".into()))?
                    .parse()
                    .map_err(|_| err(line_no, "punctures must be a nonnegative integer".into()))?;
                surface = Some(SurfaceType::new(g, m).map_err(|e| err(line_no, e.to_string()))?);
            }
            Some("branch") => {
                if surface.is_none() {
                    return Err(err(line_no, "branch before traintrack header".into()));
                }
                let id: u32 = parts
                    .next()
                    .ok_or_else(|| err(line_no, "missing branch id".into()))?
                    .parse()
                    .map_err(|_| err(line_no, "branch id must be a nonnegative integer".into()))?;
                if let Some(first) = branch_lines.get(&id) {
                    return Err(err(
                        line_no,
                        format!("duplicate branch id {id} (first declared on line {first})"),
                    ));
                }
                branch_lines.insert(id, line_no);
                branches.push(id);
                end_counts.insert(id, 0);
            }
            Some("switch") => {
                if surface.is_none() {
                    return Err(err(line_no, "switch before traintrack header".into()));
                }
                let mut incoming = None;
                let mut outgoing = None;
                for field in parts {
                    if let Some(ids) = field.strip_prefix("in:") {
                        incoming = Some(parse_id_list(ids, line_no)?);
                    } else if let Some(ids) = field.strip_prefix("out:") {
                        outgoing = Some(parse_id_list(ids, line_no)?);
                    } else {
                        return Err(err(line_no, format!("unexpected field `{field}`")));
                    }
                }
                let incoming =
                    incoming.ok_or_else(|| err(line_no, "switch missing in: list".into()))?;
                let outgoing =
                    outgoing.ok_or_else(|| err(line_no, "switch missing out: list".into()))?;
                if incoming.is_empty() || outgoing.is_empty() {
                    return Err(err(line_no, "switch sides must be nonempty".into()));
                }
                for id in incoming.iter().chain(outgoing.iter()) {
                    let count = end_counts.get_mut(id).ok_or_else(|| {
                        err(line_no, format!("switch references undeclared branch {id}"))
                    })?;
                    *count += 1;
                    if *count > 2 {
                        return Err(err(line_no, format!("branch {id} has more than two ends")));
                    }
                }
                switches.push(Switch { incoming, outgoing });
            }
            Some(other) => {
                return Err(err(line_no, format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }

    let surface = surface.ok_or_else(|| err(1, "missing traintrack header".into()))?;
    for (id, count) in &end_counts {
        if *count != 2 {
            let line = branch_lines[id];
            return Err(err(
                line,
                format!("branch {id} has {count} ends placed at switches, expected 2"),
            ));
        }
    }
    TrainTrackGraph::new(surface, branches, switches, true)
}

fn parse_id_list(s: &str, line: usize) -> Result<Vec<u32>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| CoreError::TrackParse {
                    line,
                    msg: format!("invalid branch id `{tok}`"),
                })
        })
        .collect()
}

/// Serializes a track in the format accepted by [`parse_track`].
pub fn format_track(track: &TrainTrackGraph) -> String {
    let mut out = format!(
        "traintrack {} {}\n",
        track.surface.genus(),
        track.surface.punctures()
    );
    for id in &track.branches {
        out.push_str(&format!("branch {id}\n"));
    }
    for sw in &track.switches {
        let ins: Vec<String> = sw.incoming.iter().map(|i| i.to_string()).collect();
        let outs: Vec<String> = sw.outgoing.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "switch in:{} out:{}\n",
            ins.join(","),
            outs.join(",")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Floating-point rank with partial pivoting; the second, independent
    /// algorithm for the dual-rank cross-check.
    fn float_rank(m: &[Vec<i64>]) -> usize {
        if m.is_empty() {
            return 0;
        }
        let rows = m.len();
        let cols = m[0].len();
        let mut a: Vec<Vec<f64>> = m
            .iter()
            .map(|r| r.iter().map(|x| *x as f64).collect())
            .collect();
        let mut rank = 0;
        for col in 0..cols {
            let piv = (rank..rows).max_by(|x, y| a[*x][col].abs().total_cmp(&a[*y][col].abs()));
            let Some(p) = piv else { break };
            if a[p][col].abs() < 1e-9 {
                continue;
            }
            a.swap(rank, p);
            for r in 0..rows {
                if r != rank {
                    let f = a[r][col] / a[rank][col];
                    for c in col..cols {
                        a[r][c] -= f * a[rank][c];
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    #[test]
    fn torus_fixture_has_cone_dimension_two() {
        let t = TrainTrackGraph::torus_fixture();
        assert_eq!(t.cone_dimension().unwrap(), 2);
        assert_eq!(t.cone_dimension().unwrap() as i64, t.surface.mf_dimension());
        let m = t.switch_matrix().unwrap();
        assert_eq!(m, vec![vec![0, 0]]);
    }

    #[test]
    fn torus_fixture_cone_is_the_quadrant_model() {
        // The kernel basis must be a linear bijection onto the [a, b]
        // quadrant model: a 2x2 integer matrix of rank 2.
        let t = TrainTrackGraph::torus_fixture();
        let basis = t.kernel_basis().unwrap();
        assert_eq!(basis.len(), 2);
        let m: Vec<Vec<i64>> = basis.clone();
        assert_eq!(rational_rank(&m), 2);
    }

    #[test]
    fn single_loop_has_cone_dimension_one() {
        let t = TrainTrackGraph::single_loop_fixture();
        assert_eq!(t.cone_dimension().unwrap(), 1);
    }

    #[test]
    fn dangling_branch_is_rejected() {
        let bad = TrainTrackGraph::new(
            SurfaceType::ONCE_PUNCTURED_TORUS,
            vec![1, 2],
            vec![Switch {
                incoming: vec![1],
                outgoing: vec![1, 2],
            }],
            true,
        );
        match bad {
            Err(CoreError::InvalidTrack(msg)) => assert!(msg.contains("branch 2"), "{msg}"),
            other => panic!("expected invalid-track error, got {other:?}"),
        }
    }

    #[test]
    fn disconnected_track_is_rejected() {
        let bad = TrainTrackGraph::new(
            SurfaceType::ONCE_PUNCTURED_TORUS,
            vec![1, 2],
            vec![
                Switch {
                    incoming: vec![1],
                    outgoing: vec![1],
                },
                Switch {
                    incoming: vec![2],
                    outgoing: vec![2],
                },
            ],
            true,
        );
        match bad {
            Err(CoreError::InvalidTrack(msg)) => assert!(msg.contains("disconnected"), "{msg}"),
            other => panic!("expected invalid-track error, got {other:?}"),
        }
    }

    fn random_consistent_track(seed: u64) -> TrainTrackGraph {
        // Random placement of branch ends on switch sides, retried until
        // structurally valid.
        let mut rng = SeedStream::new(seed, 0).rng();
        loop {
            let n_switch = 2 + (rng.next_u64() % 3) as usize;
            let n_branch = n_switch + 1 + (rng.next_u64() % 4) as usize;
            let mut switches: Vec<Switch> = (0..n_switch)
                .map(|_| Switch {
                    incoming: vec![],
                    outgoing: vec![],
                })
                .collect();
            for id in 1..=n_branch as u32 {
                for _ in 0..2 {
                    let s = (rng.next_u64() % n_switch as u64) as usize;
                    if rng.next_u64().is_multiple_of(2) {
                        switches[s].incoming.push(id);
                    } else {
                        switches[s].outgoing.push(id);
                    }
                }
            }
            let candidate = TrainTrackGraph::new(
                SurfaceType::ONCE_PUNCTURED_TORUS,
                (1..=n_branch as u32).collect(),
                switches,
                true,
            );
            if let Ok(t) = candidate {
                return t;
            }
        }
    }

    use rand_core::RngCore;

    #[test]
    fn dual_rank_algorithms_agree_on_random_tracks() {
        for seed in 0..40u64 {
            let t = random_consistent_track(seed);
            let m = t.switch_matrix().unwrap();
            let exact = rational_rank(&m);
            assert_eq!(exact, float_rank(&m), "track {t:?}");
            assert_eq!(t.cone_dimension().unwrap(), t.branches.len() - exact);
        }
    }

    #[test]
    fn cone_dimension_invariant_under_relabeling() {
        let t = TrainTrackGraph::new(
            SurfaceType::ONCE_PUNCTURED_TORUS,
            vec![7, 3],
            vec![Switch {
                incoming: vec![7, 3],
                outgoing: vec![7, 3],
            }],
            true,
        )
        .unwrap();
        assert_eq!(t.cone_dimension().unwrap(), 2);
    }

    #[test]
    fn samples_satisfy_switch_conditions() {
        let t = TrainTrackGraph::torus_fixture();
        let samples = t.sample_cone(1.0, 500, &SeedStream::new(3, 0)).unwrap();
        assert_eq!(samples.len(), 500);
        for w in &samples {
            assert!(w.switch_residual_max(&t) <= 1e-12);
            assert!(w.get(1) >= 0.0 && w.get(1) <= 1.0);
            assert!(w.get(2) >= 0.0 && w.get(2) <= 1.0);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let t = TrainTrackGraph::torus_fixture();
        let a = t.sample_cone(1.0, 50, &SeedStream::new(5, 1)).unwrap();
        let b = t.sample_cone(1.0, 50, &SeedStream::new(5, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn integer_weights_have_exactly_zero_residual() {
        let t = random_consistent_track(11);
        let basis = t.kernel_basis().unwrap();
        // Integer combinations of the integer kernel basis stay exact in f64.
        for v in &basis {
            let w = WeightVector {
                weights: t
                    .branches
                    .iter()
                    .copied()
                    .zip(v.iter().map(|x| *x as f64))
                    .collect(),
            };
            assert_eq!(w.switch_residual_max(&t), 0.0);
        }
    }

    #[test]
    fn volume_of_a_box_region_matches_analytic() {
        let t = TrainTrackGraph::torus_fixture();
        let (vol, se) = t
            .thurston_volume_estimate(
                2.0,
                |w| w.get(1) <= 0.5 && w.get(2) <= 1.0 && w.get(1) >= 0.0 && w.get(2) >= 0.0,
                200_000,
                &SeedStream::new(8, 0),
            )
            .unwrap();
        assert!((vol - 0.5).abs() <= 3.0 * se, "vol {vol} se {se}");
    }

    #[test]
    fn empty_region_has_zero_volume() {
        let t = TrainTrackGraph::torus_fixture();
        let (vol, se) = t
            .thurston_volume_estimate(1.0, |_| false, 10_000, &SeedStream::new(9, 0))
            .unwrap();
        assert_eq!(vol, 0.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn scaling_counts_follow_homogeneity() {
        // Volume of {w <= t·c} scales like t^{2ξ} = t^2 on the torus cone.
        let t = TrainTrackGraph::torus_fixture();
        let n = 400_000;
        let region = |c: f64| {
            move |w: &WeightVector| {
                w.get(1) >= 0.0 && w.get(2) >= 0.0 && w.get(1) <= c && w.get(2) <= c
            }
        };
        let (v1, e1) = t
            .thurston_volume_estimate(2.0, region(0.5), n, &SeedStream::new(10, 0))
            .unwrap();
        let (v2, e2) = t
            .thurston_volume_estimate(2.0, region(1.0), n, &SeedStream::new(10, 1))
            .unwrap();
        let ratio = v2 / v1;
        let se = ratio * ((e1 / v1).powi(2) + (e2 / v2).powi(2)).sqrt();
        assert!((ratio - 4.0).abs() <= 3.0 * se, "ratio {ratio} se {se}");
    }

    #[test]
    fn parser_round_trips_the_fixture() {
        let t = TrainTrackGraph::torus_fixture();
        let text = format_track(&t);
        let back = parse_track(&text).unwrap();
        assert_eq!(t.branches, back.branches);
        assert_eq!(t.switches, back.switches);
        assert_eq!(t.surface, back.surface);
    }

    #[test]
    fn parser_rejects_duplicates_with_line_numbers() {
        let text = "traintrack 1 1\nbranch 1\nbranch 1\n";
        match parse_track(text) {
            Err(CoreError::TrackParse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("duplicate"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parser_rejects_unbalanced_ends_with_line_numbers() {
        let text = "traintrack 1 1\nbranch 1\nbranch 2\nswitch in:1 out:1\n";
        match parse_track(text) {
            Err(CoreError::TrackParse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("branch 2"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parser_rejects_undeclared_ids() {
        let text = "traintrack 1 1\nbranch 1\nswitch in:1,2 out:1\n";
        match parse_track(text) {
            Err(CoreError::TrackParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
