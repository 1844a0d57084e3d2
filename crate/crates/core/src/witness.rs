//! Witness graphs and the red-edge replay.
//!
//! Every edge `e` of the closure gets a witness `W_e`, a subgraph of the
//! initial graph with `e` in its closure: `{e}` for initial edges, otherwise
//! the union of the witnesses of the non-anchor edges of the recorded copy.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::engine::{close, ClosureOptions, ClosureTrace, Embedding};
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph};
use crate::pattern::{analyze, PatternStats, MAX_PATTERN_VERTICES};
use crate::rational::Rational;
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessRecord {
    pub target: Edge,
    /// Round the target was added in, 0 for initial edges.
    pub round: usize,
    pub witness: EdgeSet,
    /// Vertices spanned by the witness, endpoints included.
    pub vertices: usize,
    pub edge_count: usize,
    /// Edges above `lambda (k - 2) + 1`.
    pub excess_lambda: Option<Rational>,
    /// Edges above `lambda_*(k - v_H) + e_H - 1`; only for `k >= v_H`.
    pub excess_star: Option<Rational>,
}

impl WitnessRecord {
    /// Vertices besides the target's endpoints.
    pub fn size(&self) -> usize {
        self.vertices - 2
    }
}

pub type WitnessMap = BTreeMap<Edge, WitnessRecord>;

fn make_record(target: Edge, round: usize, witness: EdgeSet, v_h: usize, stats: Option<&PatternStats>) -> WitnessRecord {
    let vertices = witness.spanned_vertices();
    let edge_count = witness.len();
    let count = Rational::integer(edge_count as i64);
    let excess_lambda = stats.and_then(|s| s.lambda_bound(vertices)).map(|b| count - b);
    let excess_star = if vertices >= v_h {
        stats.and_then(|s| s.star_bound(vertices)).map(|b| count - b)
    } else {
        None
    };
    WitnessRecord {
        target,
        round,
        witness,
        vertices,
        edge_count,
        excess_lambda,
        excess_star,
    }
}

/// Builds the witness of every closure edge from a finished trace.
pub fn witnesses_from_trace(trace: &ClosureTrace, h: &Graph, stats: Option<&PatternStats>) -> WitnessMap {
    let n = trace.initial.n();
    let mut map = WitnessMap::new();
    for e in trace.initial.edges() {
        let mut w = EdgeSet::new(n);
        w.insert(e);
        map.insert(e, make_record(e, 0, w, h.n(), stats));
    }
    for round in &trace.rounds {
        let mut fresh = Vec::with_capacity(round.added.len());
        for (e, emb) in &round.added {
            let mut w = EdgeSet::new(n);
            for f in emb.support_edges(h) {
                w.union_with(&map[&f].witness);
            }
            fresh.push(make_record(*e, round.t, w, h.n(), stats));
        }
        for r in fresh {
            map.insert(r.target, r);
        }
    }
    map
}

/// Runs the closure and the witness set algorithm. Pattern invariants are
/// attached when the pattern is small enough to analyze.
pub fn close_with_witnesses(g: &Graph, h: &Graph) -> (ClosureTrace, WitnessMap) {
    let trace = close(g, h, &ClosureOptions::default());
    let stats = (h.n() <= MAX_PATTERN_VERTICES).then(|| analyze(h).ok()).flatten();
    let map = witnesses_from_trace(&trace, h, stats.as_ref());
    (trace, map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepCase {
    Case1,
    Case2,
    TreeStep,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MergedComponent {
    /// Smallest step index in the component.
    pub id: usize,
    pub epsilon: usize,
    pub delta: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentStats {
    pub id: usize,
    pub steps: usize,
    pub vertices: usize,
    pub non_red_edges: usize,
    pub case2_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct REAStep {
    pub j: usize,
    pub copy: Embedding,
    pub red_edge: Edge,
    pub merged: Vec<MergedComponent>,
    pub case: StepCase,
    pub new_component: bool,
    /// The component formed by this step.
    pub formed: ComponentStats,
}

impl REAStep {
    pub fn is_case2(&self) -> bool {
        self.case != StepCase::Case1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct REATrace {
    pub target: Edge,
    pub steps: Vec<REAStep>,
    pub components: Vec<ComponentStats>,
}

impl REATrace {
    pub fn case2_count(&self) -> usize {
        self.steps.iter().filter(|s| s.is_case2()).count()
    }

    pub fn red_edges(&self) -> Vec<Edge> {
        self.steps.iter().map(|s| s.red_edge).collect()
    }
}

struct Component {
    id: usize,
    vertices: BTreeSet<usize>,
    edges: BTreeSet<Edge>,
    steps: usize,
    case2: usize,
}

impl Component {
    fn stats(&self) -> ComponentStats {
        ComponentStats {
            id: self.id,
            steps: self.steps,
            vertices: self.vertices.len(),
            non_red_edges: self.edges.len() - self.steps,
            case2_steps: self.case2,
        }
    }
}

/// Replays the red edge algorithm for `target`: the recursively needed
/// closure edges are added one copy at a time in (round, edge) order while
/// the hypergraph components of the added copies are tracked.
pub fn rea_replay(target: Edge, witnesses: &WitnessMap, trace: &ClosureTrace, h: &Graph) -> Result<REATrace> {
    let bad = |m: String| Error::InconsistentTrace(m);
    let certs = trace.certificates();
    let record = witnesses
        .get(&target)
        .ok_or(Error::NotInClosure(target.u, target.v))?;
    if record.round == 0 {
        return Ok(REATrace {
            target,
            steps: Vec::new(),
            components: Vec::new(),
        });
    }

    let mut red = BTreeSet::new();
    let mut stack = vec![target];
    while let Some(e) = stack.pop() {
        if !red.insert(e) {
            continue;
        }
        let (_, emb) = certs.get(&e).ok_or_else(|| bad(format!("no certificate for {e}")))?;
        for f in emb.support_edges(h) {
            if !trace.initial.has_edge(f.u, f.v) && !red.contains(&f) {
                stack.push(f);
            }
        }
    }
    let mut order: Vec<(usize, Edge)> = red.iter().map(|e| (certs[e].0, *e)).collect();
    order.sort_unstable();

    let mut owner: HashMap<Edge, usize> = HashMap::new();
    let mut comps: BTreeMap<usize, Component> = BTreeMap::new();
    let mut added_red: BTreeSet<Edge> = BTreeSet::new();
    let mut steps = Vec::with_capacity(order.len());

    for (j, &(_, e)) in order.iter().enumerate() {
        let emb = certs[&e].1;
        let image = emb.image_edges(h);
        if owner.contains_key(&e) {
            return Err(bad(format!("red edge {e} already lies in an earlier copy")));
        }
        for f in emb.support_edges(h) {
            if !trace.initial.has_edge(f.u, f.v) && !added_red.contains(&f) {
                return Err(bad(format!("copy for {e} uses {f} before it is added")));
            }
        }
        let copy_vertices: BTreeSet<usize> = emb.map.iter().copied().collect();
        let mut ids: Vec<usize> = image.iter().filter_map(|f| owner.get(f).copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        let merged_comps: Vec<Component> = ids.iter().map(|id| comps.remove(id).unwrap()).collect();

        let mut merged = Vec::with_capacity(merged_comps.len());
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for c in &merged_comps {
            let epsilon = c.vertices.intersection(&copy_vertices).count();
            let delta = c
                .vertices
                .iter()
                .filter(|v| seen.contains(v) && !copy_vertices.contains(v))
                .count();
            merged.push(MergedComponent { id: c.id, epsilon, delta });
            seen.extend(c.vertices.iter().copied());
        }

        let support: Vec<Edge> = emb.support_edges(h);
        let new_component = merged_comps.is_empty();
        let case = if merged_comps.len() == 1 && support.iter().all(|f| merged_comps[0].edges.contains(f)) {
            StepCase::Case1
        } else if merged.iter().all(|m| m.epsilon == 2 && m.delta == 0) {
            StepCase::TreeStep
        } else {
            StepCase::Case2
        };

        let id = ids.first().copied().unwrap_or(j).min(j);
        let mut formed = Component {
            id,
            vertices: copy_vertices,
            edges: image.iter().copied().collect(),
            steps: 1,
            case2: usize::from(case != StepCase::Case1),
        };
        for c in merged_comps {
            formed.vertices.extend(c.vertices);
            formed.edges.extend(c.edges);
            formed.steps += c.steps;
            formed.case2 += c.case2;
        }
        for f in &formed.edges {
            owner.insert(*f, id);
        }
        added_red.insert(e);
        let stats = formed.stats();
        comps.insert(id, formed);
        steps.push(REAStep {
            j: j + 1,
            copy: emb.clone(),
            red_edge: e,
            merged,
            case,
            new_component,
            formed: stats,
        });
    }

    if comps.len() != 1 {
        return Err(bad(format!("replay for {target} ends with {} components", comps.len())));
    }
    let last = comps.values().next().unwrap();
    let mut black = EdgeSet::new(trace.initial.n());
    for f in last.edges.iter().filter(|f| !added_red.contains(f)) {
        black.insert(*f);
    }
    if black != record.witness {
        return Err(bad(format!("replay for {target} does not reproduce its witness")));
    }
    Ok(REATrace {
        target,
        steps,
        components: comps.values().map(Component::stats).collect(),
    })
}

/// Checks the round-wise growth of the largest witness and that every scale
/// up to the largest witness is hit within a factor `e_H`.
pub fn check_aizenman_lebowitz(witnesses: &WitnessMap, h: &Graph) -> CheckReport {
    let mut report = CheckReport::new("aizenman-lebowitz");
    let (vh, eh) = (h.n(), h.edge_count());
    let rounds = witnesses.values().map(|r| r.round).max().unwrap_or(0);
    let mut best = vec![0usize; rounds + 1];
    for r in witnesses.values() {
        best[r.round] = best[r.round].max(r.size());
    }
    // cumulative maxima
    for t in 1..=rounds {
        best[t] = best[t].max(best[t - 1]);
    }
    if rounds >= 1 {
        report.record((best[1] != vh - 2).then(|| format!("M_1 = {}, expected {}", best[1], vh - 2)));
    }
    for t in 1..rounds {
        let cap = vh - 2 + (eh - 1) * best[t];
        report.record((best[t + 1] > cap).then(|| format!("M_{} = {} > {cap}", t + 1, best[t + 1])));
    }
    let sizes: BTreeSet<usize> = witnesses.values().map(|r| r.size()).collect();
    let top = sizes.iter().next_back().copied().unwrap_or(0);
    for k in 1..=top {
        let hit = sizes.range(k..=eh * k).next().is_some();
        report.record((!hit).then(|| format!("no witness size in [{k}, {}]", eh * k)));
    }
    report
}

/// `W_e` has at least `lambda_*(k - v_H) + e_H - 1` edges whenever `k >= v_H`.
pub fn check_edge_lower_bound(witnesses: &WitnessMap, stats: &PatternStats) -> CheckReport {
    let Some(_) = stats.lambda_star else {
        return CheckReport::inapplicable("edge-lower-bound", "lambda_* undefined");
    };
    let mut report = CheckReport::new("edge-lower-bound");
    report.note = Some("baseline lambda_*(k - v_H) + e_H - 1".into());
    for r in witnesses.values().filter(|r| r.vertices >= stats.v_h) {
        let bound = stats.star_bound(r.vertices).unwrap();
        let count = Rational::integer(r.edge_count as i64);
        report.record((count < bound).then(|| {
            format!("W_({}) has {} edges on {} vertices, bound {bound}", r.target, r.edge_count, r.vertices)
        }));
    }
    report
}

/// Count of witnesses by (vertices, excess over `lambda (k - 2) + 1`).
pub fn excess_histogram(witnesses: &WitnessMap) -> BTreeMap<(usize, Rational), usize> {
    let mut hist = BTreeMap::new();
    for r in witnesses.values() {
        if let Some(l) = r.excess_lambda {
            *hist.entry((r.vertices, l)).or_insert(0) += 1;
        }
    }
    hist
}

/// Every component formed during the replay has at least
/// `lambda_*(v_C - v_H) + e_H - 1` non-red edges.
pub fn check_component_bound(rea: &REATrace, stats: &PatternStats) -> CheckReport {
    if stats.lambda_star.is_none() {
        return CheckReport::inapplicable("component-bound", "lambda_* undefined");
    }
    let mut report = CheckReport::new("component-bound");
    for s in &rea.steps {
        let c = &s.formed;
        let bound = stats.star_bound(c.vertices).unwrap();
        report.record((Rational::integer(c.non_red_edges as i64) < bound).then(|| {
            format!(
                "step {} of {}: component with {} vertices has {} non-red edges, bound {bound}",
                s.j, rea.target, c.vertices, c.non_red_edges
            )
        }));
    }
    report
}

/// At most `(k - 2)/(v_H - 2) + l/xi'` Case-2 steps, `k` the witness's
/// vertices and `l` its excess over `lambda (k - 2) + 1`.
pub fn check_case2_bound(rea: &REATrace, record: &WitnessRecord, stats: &PatternStats) -> CheckReport {
    if !stats.strictly_balanced || !stats.has_positive_xi() {
        return CheckReport::inapplicable("case2-bound", "requires strictly balanced H with xi > 0");
    }
    let Some(excess) = record.excess_lambda else {
        return CheckReport::inapplicable("case2-bound", "lambda undefined");
    };
    let mut report = CheckReport::new("case2-bound");
    let bound = Rational::new(record.vertices as i64 - 2, stats.v_h as i64 - 2) + excess / stats.xi_prime;
    let count = rea.case2_count();
    report.record((Rational::integer(count as i64) > bound).then(|| {
        format!("{}: {count} Case-2 steps, bound {bound}", rea.target)
    }));
    report
}

/// Re-closes every witness on its own and checks it contains the target and
/// lies inside the initial graph.
pub fn check_witness_closure(witnesses: &WitnessMap, initial: &Graph, h: &Graph) -> CheckReport {
    let mut report = CheckReport::new("witness-closure");
    let base = EdgeSet::from_graph(initial);
    for r in witnesses.values() {
        if !r.witness.is_subset_of(&base) {
            report.record(Some(format!("W_({}) is not inside the initial graph", r.target)));
            continue;
        }
        let g = r.witness.to_graph();
        let ok = g.has_edge(r.target.u, r.target.v)
            || close(&g, h, &ClosureOptions::default())
                .final_graph
                .has_edge(r.target.u, r.target.v);
        report.record((!ok).then(|| format!("({}) is not in the closure of its witness", r.target)));
    }
    report
}

/// All witness checks for one closure run. REA-based checks cover every
/// added edge.
pub fn verify_run(g: &Graph, h: &Graph, stats: &PatternStats) -> Result<Vec<CheckReport>> {
    let trace = close(g, h, &ClosureOptions::default());
    let witnesses = witnesses_from_trace(&trace, h, Some(stats));
    let mut comp = CheckReport::new("component-bound");
    let mut case2 = CheckReport::new("case2-bound");
    for r in witnesses.values().filter(|r| r.round > 0) {
        let rea = rea_replay(r.target, &witnesses, &trace, h)?;
        comp.merge(check_component_bound(&rea, stats));
        case2.merge(check_case2_bound(&rea, r, stats));
    }
    if stats.lambda_star.is_none() {
        comp = CheckReport::inapplicable("component-bound", "lambda_* undefined");
    }
    if !stats.strictly_balanced || !stats.has_positive_xi() {
        case2 = CheckReport::inapplicable("case2-bound", "requires strictly balanced H with xi > 0");
    }
    Ok(vec![
        check_witness_closure(&witnesses, g, h),
        check_aizenman_lebowitz(&witnesses, h),
        check_edge_lower_bound(&witnesses, stats),
        comp,
        case2,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_clique;
    use crate::ladder::{build_ladder, LadderSpec};

    fn k5_ladder() -> (Graph, Graph) {
        let h = make_clique(5).unwrap();
        let l = build_ladder(&LadderSpec::canonical(&h, 3).unwrap()).unwrap();
        (l.graph, h)
    }

    #[test]
    fn initial_edges_are_their_own_witness() {
        let (g, h) = k5_ladder();
        let (_, w) = close_with_witnesses(&g, &h);
        let r = &w[&Edge::new(2, 4)];
        assert_eq!((r.round, r.size(), r.edge_count), (0, 0, 1));
        assert_eq!(r.excess_star, None);
    }

    #[test]
    fn first_round_witness_is_pattern_minus_edge() {
        let h = make_clique(4).unwrap();
        let g = h.without_edge(Edge::new(1, 3));
        let (_, w) = close_with_witnesses(&g, &h);
        let r = &w[&Edge::new(1, 3)];
        assert_eq!((r.round, r.size(), r.edge_count), (1, 2, 5));
        let (trace, w) = close_with_witnesses(&g, &h);
        let rea = rea_replay(Edge::new(1, 3), &w, &trace, &h).unwrap();
        assert_eq!(rea.steps.len(), 1);
        assert!(rea.steps[0].new_component);
        assert_eq!(rea.steps[0].case, StepCase::TreeStep);
        assert_eq!(rea.case2_count(), 1);
    }

    #[test]
    fn ladder_base_witness_is_whole_ladder() {
        let (g, h) = k5_ladder();
        let (trace, w) = close_with_witnesses(&g, &h);
        let r = &w[&Edge::new(0, 1)];
        assert_eq!((r.vertices, r.edge_count, r.round), (11, 25, 3));
        assert_eq!(r.excess_star, Some(Rational::zero()));
        assert_eq!(r.excess_lambda, Some(Rational::zero()));

        let rea = rea_replay(Edge::new(0, 1), &w, &trace, &h).unwrap();
        assert_eq!(rea.steps.len(), 3);
        assert!(rea.steps.iter().all(|s| s.case == StepCase::TreeStep));
        assert!(rea.steps[0].new_component);
        assert_eq!(rea.red_edges().last(), Some(&Edge::new(0, 1)));
        assert_eq!(rea.case2_count(), 3);

        let stats = analyze(&h).unwrap();
        let comp = check_component_bound(&rea, &stats);
        assert!(comp.passed());
        for s in &rea.steps {
            let b = stats.star_bound(s.formed.vertices).unwrap();
            assert_eq!(Rational::integer(s.formed.non_red_edges as i64), b);
        }
        let c2 = check_case2_bound(&rea, r, &stats);
        assert!(c2.applicable && c2.passed());
    }

    #[test]
    fn ladder_checks_pass() {
        let (g, h) = k5_ladder();
        let stats = analyze(&h).unwrap();
        let (_, w) = close_with_witnesses(&g, &h);
        let sizes: BTreeSet<usize> = w.values().map(|r| r.size()).collect();
        assert!([0, 3, 6, 9].iter().all(|s| sizes.contains(s)));
        assert!(check_aizenman_lebowitz(&w, &h).passed());
        assert!(check_edge_lower_bound(&w, &stats).passed());
        for rep in verify_run(&g, &h, &stats).unwrap() {
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn target_in_initial_graph_replays_empty() {
        let (g, h) = k5_ladder();
        let (trace, w) = close_with_witnesses(&g, &h);
        let rea = rea_replay(Edge::new(2, 4), &w, &trace, &h).unwrap();
        assert!(rea.steps.is_empty());
        assert_eq!(
            rea_replay(Edge::new(0, 10), &w, &trace, &h).err(),
            Some(Error::NotInClosure(0, 10))
        );
    }

    #[test]
    fn case2_inapplicable_for_k4() {
        let h = make_clique(4).unwrap();
        let g = h.without_edge(Edge::new(0, 1));
        let stats = analyze(&h).unwrap();
        let (trace, w) = close_with_witnesses(&g, &h);
        let rea = rea_replay(Edge::new(0, 1), &w, &trace, &h).unwrap();
        assert!(!check_case2_bound(&rea, &w[&Edge::new(0, 1)], &stats).applicable);
    }

    #[test]
    fn empty_first_round_is_vacuous() {
        let h = make_clique(4).unwrap();
        let (_, w) = close_with_witnesses(&crate::graph::make_path(6), &h);
        let rep = check_aizenman_lebowitz(&w, &h);
        assert!(rep.passed());
        assert_eq!(rep.checked, 0);
    }
}
