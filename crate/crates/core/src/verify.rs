//! Brute-force oracles, exhaustive enumeration of small symmetric graphs, and
//! experiments that check the characterisation on every small instance.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::construct::build_chain;
use crate::graph::{Edge, Graph, GroupCase, SymmetricGraph};
use crate::linalg::frac;
use crate::placement::{candidate_isometries, placement_from_trees, synthesize, PlacementError};
use crate::polynorm::{is_isostatic, Placement, Point, QuadNorm};
use crate::treepack::{check_admissible, TreeMode, TreePair};

/// Largest vertex count the enumerators accept.
pub const MAX_VERTICES: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("enumeration budget exceeded: {requested} vertices requested, at most {limit}")]
    BudgetExceeded { requested: usize, limit: usize },
    #[error(transparent)]
    Placement(#[from] PlacementError),
}

/// Outcome of an experiment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub instances: usize,
    pub agreements: usize,
    pub counterexamples: Vec<String>,
    /// Seed of the random generator, for sampled experiments.
    pub seed: Option<u64>,
    /// Filled in by callers that can read a clock.
    pub seconds: Option<f64>,
    /// Breakdown counts, e.g. admissible instances or instances per method.
    pub tallies: BTreeMap<String, usize>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>) -> Self {
        ExperimentReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn record(&mut self, agree: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if agree {
            self.agreements += 1;
        } else {
            self.counterexamples.push(describe());
        }
    }

    pub fn tally(&mut self, key: impl Into<String>) {
        *self.tallies.entry(key.into()).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: ExperimentReport) {
        self.instances += other.instances;
        self.agreements += other.agreements;
        self.counterexamples.extend(other.counterexamples);
        for (k, v) in other.tallies {
            *self.tallies.entry(k).or_insert(0) += v;
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.agreements == self.instances
    }

    /// Line-oriented text summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: {}", self.name);
        let _ = writeln!(s, "instances: {}", self.instances);
        let _ = writeln!(s, "agreements: {}", self.agreements);
        let _ = writeln!(s, "counterexamples: {}", self.counterexamples.len());
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed: {seed}");
        }
        if let Some(t) = self.seconds {
            let _ = writeln!(s, "seconds: {t:.3}");
        }
        for (k, v) in &self.tallies {
            let _ = writeln!(s, "tally {k}: {v}");
        }
        for c in &self.counterexamples {
            let _ = writeln!(s, "counterexample: {c}");
        }
        s
    }
}

// ---------------------------------------------------------------------------
// non-symmetric oracle

/// Whether the edges split into two spanning trees, by matroid-partition
/// augmentation over two graphic matroids.
pub fn oracle_tree_decomposition(graph: &Graph) -> bool {
    let n = graph.order();
    if n == 0 || graph.size() + 2 != 2 * n {
        return false;
    }
    let edges: Vec<Edge> = graph.edges().iter().copied().collect();
    // which forest holds each edge
    let mut owner: Vec<Option<usize>> = alloc::vec![None; edges.len()];
    for start in 0..edges.len() {
        if !augment(n, &edges, &mut owner, start) {
            return false;
        }
    }
    true
}

// Path between a and b in forest k, as edge indices.
fn forest_path(
    n: usize,
    edges: &[Edge],
    owner: &[Option<usize>],
    k: usize,
    a: usize,
    b: usize,
) -> Option<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        if owner[i] == Some(k) {
            adj[e.u()].push((e.v(), i));
            adj[e.v()].push((e.u(), i));
        }
    }
    let mut prev: Vec<Option<(usize, usize)>> = alloc::vec![None; n];
    let mut seen = alloc::vec![false; n];
    let mut queue = alloc::collections::VecDeque::new();
    seen[a] = true;
    queue.push_back(a);
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &(y, i) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, i));
                queue.push_back(y);
            }
        }
    }
    if !seen[b] {
        return None;
    }
    let mut path = Vec::new();
    let mut x = b;
    while x != a {
        let (p, i) = prev[x]?;
        path.push(i);
        x = p;
    }
    Some(path)
}

fn augment(n: usize, edges: &[Edge], owner: &mut [Option<usize>], start: usize) -> bool {
    // BFS over edges; parent[y] is the edge that displaces y from its forest
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut visited = BTreeSet::new();
    let mut queue = alloc::collections::VecDeque::new();
    visited.insert(start);
    queue.push_back(start);
    while let Some(x) = queue.pop_front() {
        let e = edges[x];
        for k in 0..2 {
            if owner[x] == Some(k) {
                continue;
            }
            match forest_path(n, edges, owner, k, e.u(), e.v()) {
                None => {
                    // x enters forest k; walk back the displacement chain
                    let mut cur = x;
                    let mut target = k;
                    loop {
                        let old = owner[cur];
                        owner[cur] = Some(target);
                        match parent.get(&cur) {
                            Some(&p) => {
                                cur = p;
                                target = old.expect("displaced edges are owned");
                            }
                            None => break,
                        }
                    }
                    return true;
                }
                Some(path) => {
                    for y in path {
                        if visited.insert(y) {
                            parent.insert(y, x);
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// brute-force symmetric packing

fn spanning_tree(n: usize, edges: &[Edge]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for e in edges {
        let (a, b) = (root(&mut comp, e.u()), root(&mut comp, e.v()));
        if a == b {
            return false;
        }
        comp[a] = b;
    }
    true
}

/// Every tree pair in the given mode, by enumerating all orbit colourings.
///
/// Exponential in the number of edge orbits; an oracle for small graphs.
pub fn brute_force_tree_pairs(sg: &SymmetricGraph, mode: TreeMode) -> Vec<TreePair> {
    let n = sg.graph().order();
    let orbits = sg.orbits().edge_orbits;
    let k = orbits.len();
    let mut out = Vec::new();
    if k > 24 {
        return out;
    }
    for mask in 0u32..(1u32 << k) {
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        let mut ok = true;
        for (i, orbit) in orbits.iter().enumerate() {
            let bit = (mask >> i) & 1 == 1;
            match mode {
                TreeMode::Invariant => {
                    if bit {
                        t1.extend(orbit.iter().copied());
                    } else {
                        t2.extend(orbit.iter().copied());
                    }
                }
                TreeMode::Swapped => {
                    if orbit.len() % 2 == 1 {
                        ok = false;
                        break;
                    }
                    // orbit[j] is γʲ of orbit[0]
                    for (j, &e) in orbit.iter().enumerate() {
                        if (j % 2 == 0) == bit {
                            t1.push(e);
                        } else {
                            t2.push(e);
                        }
                    }
                }
            }
        }
        if ok && spanning_tree(n, &t1) && spanning_tree(n, &t2) {
            out.push(TreePair {
                tree1: t1.into_iter().collect(),
                tree2: t2.into_iter().collect(),
                mode,
            });
        }
    }
    out
}

/// Whether a symmetric isostatic placement exists, decided by testing every
/// orbit colouring whose classes are spanning trees with every isometry of
/// the required class.
pub fn exhaustive_placement_exists(
    sg: &SymmetricGraph,
    norm: &QuadNorm,
) -> Result<bool, PlacementError> {
    let taus = candidate_isometries(norm, sg.case())?;
    for pair in brute_force_tree_pairs(sg, sg.case().tree_mode()) {
        for tau in &taus {
            if placement_from_trees(sg, &pair, norm, tau).is_some() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

// ---------------------------------------------------------------------------
// enumeration

/// Cycle lengths of a canonical generator, longest first.
fn cycle_types(n: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if order == 2 {
        for k in 1..=n / 2 {
            out.push(alloc::vec![2; k]);
        }
    } else {
        for a in 1..=n / 4 {
            for b in 0..=(n - 4 * a) / 2 {
                let mut t = alloc::vec![4; a];
                t.extend(core::iter::repeat_n(2, b));
                out.push(t);
            }
        }
    }
    out
}

// Generator with the given non-trivial cycles on 0.., the rest fixed.
fn canonical_generator(n: usize, cycles: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut gen: Vec<usize> = (0..n).collect();
    let mut all = Vec::new();
    let mut next = 0;
    for &len in cycles {
        let c: Vec<usize> = (next..next + len).collect();
        for i in 0..len {
            gen[c[i]] = c[(i + 1) % len];
        }
        next += len;
        all.push(c);
    }
    for v in next..n {
        all.push(alloc::vec![v]);
    }
    (gen, all)
}

// Permutations normalising the cyclic group generated by `gen`.
fn normaliser(n: usize, gen: &[usize], cycles: &[Vec<usize>], order: usize) -> Vec<Vec<usize>> {
    let mut by_len: BTreeMap<usize, Vec<&Vec<usize>>> = BTreeMap::new();
    for c in cycles {
        by_len.entry(c.len()).or_default().push(c);
    }
    let mut perms: Vec<Vec<usize>> = alloc::vec![alloc::vec![usize::MAX; n]];
    for (len, group) in by_len {
        let m = group.len();
        let mut next = Vec::new();
        for p in &perms {
            for arrangement in permutations(m) {
                let mut rotations = alloc::vec![0usize; m];
                loop {
                    let mut q = p.clone();
                    for (i, c) in group.iter().enumerate() {
                        let target = group[arrangement[i]];
                        for j in 0..len {
                            q[c[j]] = target[(j + rotations[i]) % len];
                        }
                    }
                    next.push(q);
                    // advance the mixed-radix counter
                    let mut i = 0;
                    while i < m {
                        rotations[i] += 1;
                        if rotations[i] < len {
                            break;
                        }
                        rotations[i] = 0;
                        i += 1;
                    }
                    if i == m {
                        break;
                    }
                }
            }
        }
        perms = next;
    }
    if order == 4 {
        // reversal of every 4-cycle conjugates γ to γ⁻¹
        let mut rho: Vec<usize> = (0..n).collect();
        for c in cycles.iter().filter(|c| c.len() == 4) {
            for j in 0..4 {
                rho[c[j]] = c[(4 - j) % 4];
            }
        }
        let extra: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| (0..n).map(|v| p[rho[v]]).collect())
            .collect();
        perms.extend(extra);
    }
    debug_assert!(perms.iter().all(|p| {
        let conj: Vec<usize> = (0..n).map(|v| p[gen[inverse_at(p, v)]]).collect();
        conj == gen || (0..n).all(|v| gen[conj[v]] == v)
    }));
    perms
}

fn inverse_at(p: &[usize], v: usize) -> usize {
    p.iter().position(|&x| x == v).expect("permutation")
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, m - 1);
            out.push(q);
        }
    }
    out
}

fn edge_bit(n: usize, e: Edge) -> u32 {
    let (a, b) = e.ends();
    (a * n + b) as u32
}

fn code(n: usize, edges: &[Edge], perm: &[usize]) -> u128 {
    let mut c = 0u128;
    for e in edges {
        c |= 1u128 << edge_bit(n, e.map(|x| perm[x]));
    }
    c
}

/// Search limits for the enumerators.
#[derive(Clone, Copy, Debug)]
pub struct Filter {
    /// Keep only instances whose γ-fixed edge count is allowed by the case.
    pub fixed_edge_rule: bool,
    /// Keep only instances that pass `check_admissible`.
    pub admissible_only: bool,
}

/// Every `(G, θ)` on exactly `n` vertices with `2n − 2` edges and a faithful
/// action of the case's order, up to isomorphism of pairs.
pub fn enumerate_instances(
    n: usize,
    case: GroupCase,
    filter: Filter,
) -> Result<Vec<SymmetricGraph>, VerifyError> {
    if n > MAX_VERTICES {
        return Err(VerifyError::BudgetExceeded {
            requested: n,
            limit: MAX_VERTICES,
        });
    }
    let mut out = Vec::new();
    if n < 2 {
        return Ok(out);
    }
    let order = case.order();
    for cycles in cycle_types(n, order) {
        let (gen, all_cycles) = canonical_generator(n, &cycles);
        let probe = SymmetricGraph::new(Graph::empty(n), case, gen.clone())
            .expect("canonical generator is an automorphism of the empty graph");
        let full = {
            let mut g = Graph::empty(n);
            for a in 0..n {
                for b in a + 1..n {
                    g.add_edge(a, b).expect("simple");
                }
            }
            SymmetricGraph::new(g, case, gen.clone()).expect("complete graph")
        };
        let orbits = full.orbits().edge_orbits;
        let fixed_in: Vec<(usize, usize)> = orbits
            .iter()
            .map(|o| {
                let e = o[0];
                let f1 = usize::from(probe.image_edge(e, 1) == e);
                let f2 = usize::from(order == 4 && probe.image_edge(e, 2) == e);
                (f1 * o.len(), f2 * o.len())
            })
            .collect();
        let (max1, max2) = if filter.fixed_edge_rule {
            match case {
                GroupCase::C2 => (2, usize::MAX),
                GroupCase::C4 => (0, 2),
                _ => (0, usize::MAX),
            }
        } else {
            (usize::MAX, usize::MAX)
        };
        let target = 2 * n - 2;
        let normal = normaliser(n, &gen, &all_cycles, order);
        let mut seen: BTreeSet<u128> = BTreeSet::new();
        let mut chosen: Vec<usize> = Vec::new();
        let mut emit = |sel: &[usize]| {
            let edges: Vec<Edge> = sel
                .iter()
                .flat_map(|&i| orbits[i].iter().copied())
                .collect();
            let g = Graph::new(n, edges.iter().map(|e| e.ends())).expect("simple");
            let sg = SymmetricGraph::new(g, case, gen.clone()).expect("union of orbits");
            if filter.admissible_only && !check_admissible(&sg).admissible {
                return;
            }
            let canon = normal.iter().map(|p| code(n, &edges, p)).min().unwrap_or(0);
            if seen.insert(canon) {
                out.push(sg);
            }
        };
        select(
            &orbits,
            &fixed_in,
            0,
            target,
            (max1, max2),
            &mut chosen,
            &mut emit,
        );
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn select(
    orbits: &[Vec<Edge>],
    fixed: &[(usize, usize)],
    i: usize,
    remaining: usize,
    budget: (usize, usize),
    chosen: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(chosen);
        return;
    }
    if i == orbits.len() {
        return;
    }
    let left: usize = orbits[i..].iter().map(Vec::len).sum();
    if left < remaining {
        return;
    }
    let size = orbits[i].len();
    let (f1, f2) = fixed[i];
    if size <= remaining && f1 <= budget.0 && f2 <= budget.1 {
        chosen.push(i);
        select(
            orbits,
            fixed,
            i + 1,
            remaining - size,
            (budget.0 - f1, budget.1.saturating_sub(f2)),
            chosen,
            emit,
        );
        chosen.pop();
    }
    select(orbits, fixed, i + 1, remaining, budget, chosen, emit);
}

/// Admissible `(G, θ)` with at most `n_max` vertices, one per isomorphism
/// class of pairs.
pub fn enumerate_admissible(
    n_max: usize,
    case: GroupCase,
) -> Result<Vec<SymmetricGraph>, VerifyError> {
    let filter = Filter {
        fixed_edge_rule: true,
        admissible_only: true,
    };
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.extend(enumerate_instances(n, case, filter)?);
    }
    Ok(out)
}

/// Every instance, admissible or not, with at most `n_max` vertices.
pub fn enumerate_all(n_max: usize, case: GroupCase) -> Result<Vec<SymmetricGraph>, VerifyError> {
    let filter = Filter {
        fixed_edge_rule: false,
        admissible_only: false,
    };
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.extend(enumerate_instances(n, case, filter)?);
    }
    Ok(out)
}

/// Short description of an instance for reports.
pub fn describe(sg: &SymmetricGraph) -> String {
    let edges: Vec<String> = sg
        .graph()
        .edges()
        .iter()
        .map(|e| format!("{}-{}", e.u(), e.v()))
        .collect();
    format!(
        "n={} case={} action={:?} edges=[{}]",
        sg.graph().order(),
        sg.case().name(),
        sg.generator(),
        edges.join(" ")
    )
}

// ---------------------------------------------------------------------------
// experiments

/// The verdict of the characterisation on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub admissible: bool,
    pub placed: bool,
    /// For non-admissible instances: whether the exhaustive search found a
    /// placement anyway.
    pub oracle_placed: Option<bool>,
    pub method: Option<String>,
    pub note: Option<String>,
}

impl Verdict {
    pub fn agrees(&self) -> bool {
        self.admissible == self.placed && self.oracle_placed != Some(true)
    }
}

/// Runs `check_admissible`, `synthesize` and, when the instance is not
/// admissible, the exhaustive placement search.
pub fn instance_verdict(sg: &SymmetricGraph, norm: &QuadNorm) -> Result<Verdict, VerifyError> {
    let report = check_admissible(sg);
    let (placed, method, note) = match synthesize(sg, norm) {
        Ok(sp) => {
            let symmetric = sg.graph().vertices().all(|v| {
                sp.tau.apply(sp.placement.point(v)) == *sp.placement.point(sg.image(v, 1))
            });
            let ok =
                symmetric && sp.report.isostatic && sp.report.rank + 2 == 2 * sg.graph().order();
            (ok, Some(format!("{}", sp.method)), None)
        }
        Err(PlacementError::NotAdmissible(_)) => (false, None, None),
        Err(e @ PlacementError::NoSwappingIsometry) => return Err(e.into()),
        Err(e) => (false, None, Some(format!("{e}"))),
    };
    let oracle_placed = if report.admissible {
        None
    } else {
        Some(exhaustive_placement_exists(sg, norm)?)
    };
    Ok(Verdict {
        admissible: report.admissible,
        placed,
        oracle_placed,
        method,
        note,
    })
}

/// Adds one instance's verdict to a report.
pub fn record_verdict(report: &mut ExperimentReport, sg: &SymmetricGraph, v: &Verdict) {
    if v.admissible {
        report.tally("admissible");
    }
    if let Some(m) = &v.method {
        report.tally(format!("method {m}"));
    }
    report.record(v.agrees(), || {
        format!(
            "{} admissible={} placed={} oracle={:?} {}",
            describe(sg),
            v.admissible,
            v.placed,
            v.oracle_placed,
            v.note.clone().unwrap_or_default()
        )
    });
}

/// Condition (ii) against constructive placement on every instance with at
/// most `n_max` vertices.
pub fn equivalence_experiment(
    n_max: usize,
    case: GroupCase,
    norm: &QuadNorm,
) -> Result<ExperimentReport, VerifyError> {
    candidate_isometries(norm, case)?;
    let mut report = ExperimentReport::new(format!("equivalence {} n<={n_max}", case.name()));
    for sg in enumerate_all(n_max, case)? {
        let v = instance_verdict(&sg, norm)?;
        record_verdict(&mut report, &sg, &v);
    }
    Ok(report)
}

/// Instances whose fixed-edge count the case forbids: checks that none has a
/// symmetric isostatic placement.
pub fn fixed_edge_experiment(
    n_max: usize,
    case: GroupCase,
    norm: &QuadNorm,
) -> Result<ExperimentReport, VerifyError> {
    let mut report = ExperimentReport::new(format!("fixed edges {} n<={n_max}", case.name()));
    for sg in enumerate_all(n_max, case)? {
        let count = sg.fixed_edges(1).len();
        let forbidden = match case {
            GroupCase::C2 => count != 0 && count != 2,
            _ => count >= 1,
        };
        if !forbidden {
            continue;
        }
        report.tally(format!("{count} fixed edges"));
        if !brute_force_tree_pairs(&sg, sg.case().tree_mode()).is_empty() {
            report.tally("with symmetric tree pair");
        }
        let exists = exhaustive_placement_exists(&sg, norm)?;
        report.record(!exists, || describe(&sg));
    }
    Ok(report)
}

/// Every admissible invariant-mode instance reduces to the wheel, the chain
/// replays exactly, and every intermediate is admissible.
pub fn chain_experiment(n_max: usize, case: GroupCase) -> Result<ExperimentReport, VerifyError> {
    let mut report = ExperimentReport::new(format!("chains {} n<={n_max}", case.name()));
    for sg in enumerate_admissible(n_max, case)? {
        if !sg.fixed_edges(1).is_empty() {
            continue;
        }
        let outcome = build_chain(&sg)
            .map_err(|e| format!("{e}"))
            .and_then(|chain| {
                let graphs = chain.intermediates().map_err(|e| format!("{e}"))?;
                if graphs.last() != Some(&sg) {
                    return Err(String::from("replay differs"));
                }
                for (g, pair) in graphs.iter().zip(&chain.certified_intermediates) {
                    if !check_admissible(g).admissible || pair.validate(g).is_err() {
                        return Err(format!("intermediate on {} vertices", g.graph().order()));
                    }
                }
                Ok(chain)
            });
        match outcome {
            Ok(chain) => {
                report.tally(format!("length {}", chain.len()));
                if chain.searched_pairs > 0 {
                    report.tally("steps with searched pairs");
                }
                report.record(true, String::new);
            }
            Err(e) => report.record(false, || format!("{}: {e}", describe(&sg))),
        }
    }
    Ok(report)
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut all = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            all.push((a, b));
        }
    }
    let m = 2 * n - 2;
    // partial Fisher–Yates
    for i in 0..m {
        let j = rng.gen_range(i..all.len());
        all.swap(i, j);
    }
    Graph::new(n, all[..m].iter().copied()).expect("simple")
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    let d = rng.gen_range(1..=4);
    Point::new(
        frac(rng.gen_range(-12..=12), d),
        frac(rng.gen_range(-12..=12), d),
    )
}

/// Rank criterion against the monochrome-tree criterion on random
/// well-positioned placements.
pub fn rank_agreement_experiment(
    count: usize,
    n_max: usize,
    seed: u64,
    norm: &QuadNorm,
) -> ExperimentReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ExperimentReport::new(format!("rank agreement n<={n_max}"));
    report.seed = Some(seed);
    while report.instances < count {
        let n = rng.gen_range(3..=n_max.max(3));
        if n * (n - 1) / 2 < 2 * n - 2 {
            continue;
        }
        let g = random_graph(&mut rng, n);
        let coords: Vec<Point> = (0..n).map(|_| random_point(&mut rng)).collect();
        let Ok(p) = Placement::new(coords) else {
            continue;
        };
        let Ok(r) = is_isostatic(&g, &p, norm) else {
            // not well-positioned
            continue;
        };
        if r.isostatic {
            report.tally("isostatic");
        }
        report.record(r.criteria_agree(), || {
            format!("n={n} rank={} trees={}", r.rank, r.monochrome_trees)
        });
    }
    report
}

/// All involutions of `{0, …, n−1}` other than the identity.
pub fn involutions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = cur.len();
        if i == n {
            if cur.iter().enumerate().any(|(a, &b)| a != b) {
                out.push(cur.clone());
            }
            return;
        }
        if cur[i] != i {
            rec(i + 1, cur, out);
            return;
        }
        rec(i + 1, cur, out);
        for j in i + 1..n {
            if cur[j] == j {
                cur[i] = j;
                cur[j] = i;
                rec(i + 1, cur, out);
                cur[i] = i;
                cur[j] = j;
            }
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// All permutations of `{0, …, n−1}`, in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

/// Whether a coordinate list is well-positioned and isostatic; `None` when
/// some edge is not well-positioned.
pub fn isostatic_or_none(g: &Graph, coords: Vec<Point>, norm: &QuadNorm) -> Option<bool> {
    let p = Placement::new(coords).ok()?;
    is_isostatic(g, &p, norm).ok().map(|r| r.isostatic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::w5_base;

    #[test]
    fn oracle_small_graphs() {
        let (w5, _) = w5_base();
        assert!(oracle_tree_decomposition(w5.graph()));
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(oracle_tree_decomposition(&k4));
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!oracle_tree_decomposition(&path));
        // two triangles sharing a vertex: 6 edges on 5 vertices, too few
        let bow = Graph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(!oracle_tree_decomposition(&bow));
    }

    #[test]
    fn counting_helpers() {
        assert_eq!(all_permutations(5).len(), 120);
        // involutions of 5 points: 26, minus the identity
        assert_eq!(involutions(5).len(), 25);
        assert_eq!(permutations(3).len(), 6);
    }

    #[test]
    fn normaliser_sizes() {
        // (0 1)(2 3), 4 fixed: 2!·2²·1 = 8
        let (gen, cycles) = canonical_generator(5, &[2, 2]);
        assert_eq!(normaliser(5, &gen, &cycles, 2).len(), 8);
        // (0 1 2 3), 4 fixed: 4 rotations, doubled by the reversal
        let (gen, cycles) = canonical_generator(5, &[4]);
        assert_eq!(normaliser(5, &gen, &cycles, 4).len(), 8);
    }
}
