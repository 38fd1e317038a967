//! Factor-graph construction and the sum-product receiver.
//!
//! One graph is built per equivalent-matrix component. Factor node `i` stands for
//! received sample `y[i]` with potential `exp(-|y[i] - Σ_k c[i,k] d[k]|^2)`, where the
//! coefficients are `Ψ_I` for the in-phase graph and `jΨ_Q` for the quadrature
//! graph. Messages live in the linear domain and are normalized to unit sum after
//! every update; the schedule is synchronous flooding.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::channel::{EquivalentMatrix, ReceivedSignal};
use crate::linalg::CMatrix;
use crate::waveform::{DataFrame, SymbolAlphabet, WaveformParams};
use crate::{Error, Result};

/// Relative magnitude below which an equivalent-matrix entry is not an edge.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Normalized entries below this are treated as underflow.
const UNDERFLOW: f64 = 1e-300;
/// Value an underflowed entry is raised to before renormalizing.
const FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub factor: usize,
    pub variable: usize,
    pub weight: Complex64,
}

/// Bipartite graph between received samples (factors) and data components
/// (variables).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGraph {
    factor_count: usize,
    variable_count: usize,
    edges: Vec<Edge>,
    /// Edge ids per factor, in ascending variable order.
    factor_edges: Vec<Vec<usize>>,
    /// Edge ids per variable, in ascending factor order.
    variable_edges: Vec<Vec<usize>>,
}

/// Builds the graph from the sparsity pattern of `coeffs`: edge `(i, k)` exists iff
/// `|coeffs[i,k]| > epsilon * max|coeffs|`.
pub fn build_factor_graph(coeffs: &CMatrix, epsilon: f64) -> Result<FactorGraph> {
    let max = coeffs.max_abs();
    if !max.is_finite() {
        return Err(Error::DimensionMismatch(
            "equivalent matrix has non-finite entries".into(),
        ));
    }
    if max == 0.0 {
        return Err(Error::EmptyGraph);
    }
    let threshold = epsilon * max;
    let mut edges = Vec::new();
    let mut factor_edges = vec![Vec::new(); coeffs.rows()];
    let mut variable_edges = vec![Vec::new(); coeffs.cols()];
    for i in 0..coeffs.rows() {
        for (k, &w) in coeffs.row(i).iter().enumerate() {
            if w.norm() > threshold {
                let id = edges.len();
                edges.push(Edge {
                    factor: i,
                    variable: k,
                    weight: w,
                });
                factor_edges[i].push(id);
                variable_edges[k].push(id);
            }
        }
    }
    Ok(FactorGraph {
        factor_count: coeffs.rows(),
        variable_count: coeffs.cols(),
        edges,
        factor_edges,
        variable_edges,
    })
}

impl FactorGraph {
    /// Number of received samples, including degree-0 factors.
    pub fn factor_count(&self) -> usize {
        self.factor_count
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    /// Factors with at least one edge; only these take part in message passing.
    pub fn active_factor_count(&self) -> usize {
        self.factor_edges.iter().filter(|e| !e.is_empty()).count()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn factor_edges(&self, factor: usize) -> &[usize] {
        &self.factor_edges[factor]
    }

    pub fn variable_edges(&self, variable: usize) -> &[usize] {
        &self.variable_edges[variable]
    }

    /// Variables adjacent to `factor`.
    pub fn factor_neighbors(&self, factor: usize) -> Vec<usize> {
        self.factor_edges[factor]
            .iter()
            .map(|&e| self.edges[e].variable)
            .collect()
    }

    pub fn factor_degree(&self, factor: usize) -> usize {
        self.factor_edges[factor].len()
    }

    pub fn variable_degree(&self, variable: usize) -> usize {
        self.variable_edges[variable].len()
    }

    /// Same adjacency (edge endpoints), ignoring weights.
    pub fn same_structure(&self, other: &FactorGraph) -> bool {
        self.factor_count == other.factor_count
            && self.variable_count == other.variable_count
            && self.edges.len() == other.edges.len()
            && self
                .edges
                .iter()
                .zip(&other.edges)
                .all(|(a, b)| a.factor == b.factor && a.variable == b.variable)
    }

    /// Length of the shortest cycle, `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        // Node ids: factors first, then variables.
        let n_nodes = self.factor_count + self.variable_count;
        let neighbors = |node: usize| -> Vec<usize> {
            if node < self.factor_count {
                self.factor_edges[node]
                    .iter()
                    .map(|&e| self.factor_count + self.edges[e].variable)
                    .collect()
            } else {
                self.variable_edges[node - self.factor_count]
                    .iter()
                    .map(|&e| self.edges[e].factor)
                    .collect()
            }
        };
        let mut best: Option<usize> = None;
        for start in 0..n_nodes {
            let mut dist = vec![usize::MAX; n_nodes];
            let mut parent = vec![usize::MAX; n_nodes];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in neighbors(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

/// Per-edge message tables for one component graph.
///
/// Entry `edge * alphabet_len + a` holds the message value for alphabet element `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    alphabet_len: usize,
    f2v: Vec<f64>,
    v2f: Vec<f64>,
    iteration: usize,
    max_iterations: usize,
    underflows: u64,
    multiplications: u64,
}

impl MessageState {
    /// Uniform variable-to-factor messages, iteration 0.
    pub fn new(graph: &FactorGraph, alphabet_len: usize, max_iterations: usize) -> Self {
        let uniform = 1.0 / alphabet_len as f64;
        let len = graph.edge_count() * alphabet_len;
        Self {
            alphabet_len,
            f2v: vec![uniform; len],
            v2f: vec![uniform; len],
            iteration: 0,
            max_iterations,
            underflows: 0,
            multiplications: 0,
        }
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet_len
    }

    pub fn f2v(&self, edge: usize) -> &[f64] {
        let a = self.alphabet_len;
        &self.f2v[edge * a..(edge + 1) * a]
    }

    pub fn v2f(&self, edge: usize) -> &[f64] {
        let a = self.alphabet_len;
        &self.v2f[edge * a..(edge + 1) * a]
    }

    pub fn f2v_mut(&mut self, edge: usize) -> &mut [f64] {
        let a = self.alphabet_len;
        &mut self.f2v[edge * a..(edge + 1) * a]
    }

    pub fn v2f_mut(&mut self, edge: usize) -> &mut [f64] {
        let a = self.alphabet_len;
        &mut self.v2f[edge * a..(edge + 1) * a]
    }

    /// Completed full iterations.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    /// Messages that were all zero or had entries floored after normalization.
    pub fn underflows(&self) -> u64 {
        self.underflows
    }

    /// Complex multiplications executed so far by message updates.
    pub fn multiplications(&self) -> u64 {
        self.multiplications
    }
}

/// Normalizes to unit sum, flooring underflowed entries. Returns true if any
/// flooring happened.
fn normalize(msg: &mut [f64]) -> bool {
    let sum: f64 = msg.iter().sum();
    if !(sum > 0.0) || !sum.is_finite() {
        let uniform = 1.0 / msg.len() as f64;
        msg.iter_mut().for_each(|m| *m = uniform);
        return true;
    }
    msg.iter_mut().for_each(|m| *m /= sum);
    if msg.iter().any(|&m| m < UNDERFLOW) {
        msg.iter_mut().filter(|m| **m < UNDERFLOW).for_each(|m| *m = FLOOR);
        let sum: f64 = msg.iter().sum();
        msg.iter_mut().for_each(|m| *m /= sum);
        return true;
    }
    false
}

/// Work done by one factor update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FactorUpdateStats {
    /// Summands accumulated into output messages.
    pub terms: u64,
    pub multiplications: u64,
}

/// Computes the outgoing messages of one factor into `out` (laid out per
/// neighbor edge, in `graph.factor_edges(factor)` order) from the incoming
/// variable-to-factor messages `v2f`.
///
/// The kernel is shifted by its minimum residual energy before exponentiation;
/// the shift is a common positive factor across all assignments and vanishes in
/// normalization.
pub fn factor_messages(
    graph: &FactorGraph,
    factor: usize,
    y: Complex64,
    alphabet: &[f64],
    v2f: &[f64],
    out: &mut [f64],
) -> FactorUpdateStats {
    factor_messages_with(&mut FactorScratch::default(), graph, factor, y, alphabet, v2f, out)
}

/// Reusable buffers for [`factor_messages`].
#[derive(Debug, Default)]
struct FactorScratch {
    weights: Vec<Complex64>,
    energy: Vec<f64>,
    digits: Vec<usize>,
    incoming: Vec<f64>,
    suffix: Vec<f64>,
}

fn factor_messages_with(
    scratch: &mut FactorScratch,
    graph: &FactorGraph,
    factor: usize,
    y: Complex64,
    alphabet: &[f64],
    v2f: &[f64],
    out: &mut [f64],
) -> FactorUpdateStats {
    let edge_ids = graph.factor_edges(factor);
    let degree = edge_ids.len();
    let a_len = alphabet.len();
    let mut stats = FactorUpdateStats::default();
    if degree == 0 {
        return stats;
    }
    let combos = a_len.pow(degree as u32);
    let FactorScratch {
        weights,
        energy,
        digits,
        incoming,
        suffix,
    } = scratch;

    // Residual energy of every joint assignment; digit `p` of the mixed-radix
    // index is the alphabet index of neighbor `p` (neighbor 0 fastest).
    weights.clear();
    weights.extend(edge_ids.iter().map(|&e| graph.edges[e].weight));
    energy.clear();
    digits.clear();
    digits.resize(degree, 0);
    for _ in 0..combos {
        let mut r = y;
        for (w, &d) in weights.iter().zip(digits.iter()) {
            r -= w * alphabet[d];
        }
        energy.push(r.norm_sqr());
        advance(digits, a_len);
    }
    stats.multiplications += combos as u64 * (degree as u64 + 1);
    let min_energy = energy.iter().copied().fold(f64::INFINITY, f64::min);

    // Each term is kernel * prod_{u != j} v2f_u, built from a running prefix
    // product and a suffix product table.
    out.iter_mut().for_each(|v| *v = 0.0);
    incoming.resize(degree, 0.0);
    suffix.resize(degree + 1, 1.0);
    digits.iter_mut().for_each(|d| *d = 0);
    for &e in energy.iter() {
        let kernel = (min_energy - e).exp();
        for (u, &d) in digits.iter().enumerate() {
            incoming[u] = v2f[edge_ids[u] * a_len + d];
        }
        suffix[degree] = 1.0;
        for u in (0..degree).rev() {
            suffix[u] = suffix[u + 1] * incoming[u];
        }
        let mut prefix = kernel;
        for j in 0..degree {
            out[j * a_len + digits[j]] += prefix * suffix[j + 1];
            prefix *= incoming[j];
        }
        advance(digits, a_len);
    }
    stats.terms += (combos * degree) as u64;
    stats.multiplications += combos as u64 * 3 * degree as u64;
    stats
}

fn advance(digits: &mut [usize], radix: usize) {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return;
        }
        *d = 0;
    }
}

/// Factor-to-variable update for every active factor (flooding half-step).
pub fn factor_to_variable(
    state: &mut MessageState,
    graph: &FactorGraph,
    y: &[Complex64],
    alphabet: &[f64],
) -> Result<()> {
    if y.len() != graph.factor_count() {
        return Err(Error::DimensionMismatch(format!(
            "received vector has {} samples, graph has {} factors",
            y.len(),
            graph.factor_count()
        )));
    }
    if alphabet.len() != state.alphabet_len {
        return Err(Error::DimensionMismatch(format!(
            "alphabet has {} elements, messages have {}",
            alphabet.len(),
            state.alphabet_len
        )));
    }
    let a_len = state.alphabet_len;
    let mut out = Vec::new();
    let mut scratch = FactorScratch::default();
    for (factor, &y_i) in y.iter().enumerate() {
        let edge_ids = graph.factor_edges(factor);
        if edge_ids.is_empty() {
            continue;
        }
        out.resize(edge_ids.len() * a_len, 0.0);
        let stats =
            factor_messages_with(&mut scratch, graph, factor, y_i, alphabet, &state.v2f, &mut out);
        state.multiplications += stats.multiplications;
        for (j, &e) in edge_ids.iter().enumerate() {
            let msg = &mut state.f2v[e * a_len..(e + 1) * a_len];
            msg.copy_from_slice(&out[j * a_len..(j + 1) * a_len]);
            if normalize(msg) {
                state.underflows += 1;
            }
        }
    }
    Ok(())
}

/// Variable-to-factor update: product of the other incoming factor messages.
pub fn variable_to_factor(state: &mut MessageState, graph: &FactorGraph) {
    let a_len = state.alphabet_len;
    for var in 0..graph.variable_count() {
        let edge_ids = graph.variable_edges(var);
        for &e in edge_ids {
            for a in 0..a_len {
                let mut prod = 1.0;
                for &u in edge_ids {
                    if u != e {
                        prod *= state.f2v[u * a_len + a];
                    }
                }
                state.v2f[e * a_len + a] = prod;
            }
            state.multiplications += (a_len * edge_ids.len().saturating_sub(2)) as u64;
            if normalize(&mut state.v2f[e * a_len..(e + 1) * a_len]) {
                state.underflows += 1;
            }
        }
    }
}

/// Normalized per-variable probability vectors over a component alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginals {
    alphabet_len: usize,
    probs: Vec<f64>,
}

impl Marginals {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let alphabet_len = rows.first().map_or(0, Vec::len);
        Self {
            alphabet_len,
            probs: rows.into_iter().flatten().collect(),
        }
    }

    pub fn len(&self) -> usize {
        if self.alphabet_len == 0 {
            0
        } else {
            self.probs.len() / self.alphabet_len
        }
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, variable: usize) -> &[f64] {
        &self.probs[variable * self.alphabet_len..(variable + 1) * self.alphabet_len]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks(self.alphabet_len.max(1))
    }

    /// Index of the largest entry per variable; ties go to the smallest index.
    pub fn argmax(&self) -> Vec<usize> {
        self.iter()
            .map(|p| {
                let mut best = 0;
                for (a, &v) in p.iter().enumerate() {
                    if v > p[best] {
                        best = a;
                    }
                }
                best
            })
            .collect()
    }
}

/// Normalized product of all incoming factor messages at each variable.
pub fn marginals(state: &MessageState, graph: &FactorGraph) -> Marginals {
    let a_len = state.alphabet_len;
    let mut probs = vec![1.0; graph.variable_count() * a_len];
    for (var, p) in probs.chunks_mut(a_len).enumerate() {
        for &e in graph.variable_edges(var) {
            for (a, v) in p.iter_mut().enumerate() {
                *v *= state.f2v[e * a_len + a];
            }
        }
        normalize(p);
    }
    Marginals {
        alphabet_len: a_len,
        probs,
    }
}

/// One recorded message value: (edge id, iteration, alphabet index, value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub edge: usize,
    pub iteration: usize,
    pub alphabet_index: usize,
    pub value: f64,
}

pub fn trace_to_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from("edge,iteration,alphabet_index,value\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:e}", r.edge, r.iteration, r.alphabet_index, r.value);
    }
    out
}

/// Result of one component SPA instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentResult {
    pub marginals: Marginals,
    pub multiplications: u64,
    pub underflows: u64,
    /// Factor-to-variable messages after each iteration, when tracing is on.
    pub trace: Vec<TraceRow>,
}

/// Runs `tau` flooding iterations on one component graph.
pub fn run_component(
    graph: &FactorGraph,
    y: &[Complex64],
    alphabet: &[f64],
    tau: usize,
    trace: bool,
) -> Result<ComponentResult> {
    if tau < 1 {
        return Err(Error::ZeroIterations);
    }
    let mut state = MessageState::new(graph, alphabet.len(), tau);
    let mut rows = Vec::new();
    for t in 1..=tau {
        factor_to_variable(&mut state, graph, y, alphabet)?;
        // The final variable-to-factor half-step does not affect the marginals.
        if t < tau {
            variable_to_factor(&mut state, graph);
        }
        state.iteration = t;
        if trace {
            for e in 0..graph.edge_count() {
                for (a, &value) in state.f2v(e).iter().enumerate() {
                    rows.push(TraceRow {
                        edge: e,
                        iteration: t,
                        alphabet_index: a,
                        value,
                    });
                }
            }
        }
    }
    let marginals = marginals(&state, graph);
    state.multiplications += (graph.edge_count() * alphabet.len()) as u64;
    Ok(ComponentResult {
        marginals,
        multiplications: state.multiplications,
        underflows: state.underflows,
        trace: rows,
    })
}

/// What each component graph observes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReceiverMode {
    /// Both graphs see the full received vector.
    Combined,
    /// Each graph sees its own noise-free component plus the noise (simulation only).
    GenieSeparated,
}

impl ReceiverMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReceiverMode::Combined => "combined",
            ReceiverMode::GenieSeparated => "genie",
        }
    }
}

impl std::fmt::Display for ReceiverMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ReceiverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "combined" => Ok(ReceiverMode::Combined),
            "genie" | "genie_separated" => Ok(ReceiverMode::GenieSeparated),
            other => Err(Error::Config(format!("unknown receiver mode `{other}`"))),
        }
    }
}

/// In-phase and quadrature graphs for one equivalent matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaReceiver {
    graph_i: FactorGraph,
    graph_q: FactorGraph,
}

impl SpaReceiver {
    /// The quadrature graph uses `jΨ_Q` as edge coefficients.
    pub fn new(psi: &EquivalentMatrix) -> Result<Self> {
        Self::with_epsilon(psi, DEFAULT_EPSILON)
    }

    pub fn with_epsilon(psi: &EquivalentMatrix, epsilon: f64) -> Result<Self> {
        let graph_i = build_factor_graph(psi.psi_i(), epsilon)?;
        let graph_q = build_factor_graph(&psi.psi_q().scale(Complex64::i()), epsilon)?;
        Ok(Self { graph_i, graph_q })
    }

    pub fn graph_i(&self) -> &FactorGraph {
        &self.graph_i
    }

    pub fn graph_q(&self) -> &FactorGraph {
        &self.graph_q
    }

    pub fn run(
        &self,
        y: &ReceivedSignal,
        alphabet: &SymbolAlphabet,
        tau: usize,
        mode: ReceiverMode,
    ) -> Result<SpaOutput> {
        let (obs_i, obs_q) = match mode {
            ReceiverMode::Combined => (y.samples().to_vec(), y.samples().to_vec()),
            ReceiverMode::GenieSeparated => (y.genie_i(), y.genie_q()),
        };
        let in_phase = run_component(&self.graph_i, &obs_i, alphabet.component_i(), tau, false)?;
        let quadrature = run_component(&self.graph_q, &obs_q, alphabet.component_q(), tau, false)?;
        Ok(SpaOutput {
            in_phase,
            quadrature,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaOutput {
    pub in_phase: ComponentResult,
    pub quadrature: ComponentResult,
}

impl SpaOutput {
    pub fn multiplications(&self) -> u64 {
        self.in_phase.multiplications + self.quadrature.multiplications
    }
}

/// Builds both graphs from `psi` and returns the in-phase and quadrature marginals.
///
/// The receiver needs no noise variance.
pub fn run_spa(
    y: &ReceivedSignal,
    psi: &EquivalentMatrix,
    alphabet: &SymbolAlphabet,
    tau: usize,
    mode: ReceiverMode,
) -> Result<(Marginals, Marginals)> {
    if tau < 1 {
        return Err(Error::ZeroIterations);
    }
    if y.len() != psi.rows() {
        return Err(Error::DimensionMismatch(format!(
            "received vector has {} samples, equivalent matrix has {} rows",
            y.len(),
            psi.rows()
        )));
    }
    let out = SpaReceiver::new(psi)?.run(y, alphabet, tau, mode)?;
    Ok((out.in_phase.marginals, out.quadrature.marginals))
}

/// MAP decision per component, recombined as `d_I + j d_Q`.
pub fn map_decide(
    marginals_i: &Marginals,
    marginals_q: &Marginals,
    alphabet: &SymbolAlphabet,
) -> Result<DataFrame> {
    if marginals_i.len() != marginals_q.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} in-phase vs {} quadrature marginals",
            marginals_i.len(),
            marginals_q.len()
        )));
    }
    let symbols = marginals_i
        .argmax()
        .into_iter()
        .zip(marginals_q.argmax())
        .map(|(a, b)| Complex64::new(alphabet.component_i()[a], alphabet.component_q()[b]))
        .collect();
    Ok(DataFrame::from_symbols(symbols, alphabet))
}

/// Closed-form count of complex multiplications per data vector:
/// `[(8N³ - 4N²K - 8N² + 2NK + 2N)(J/2)^(N-1) + 2N³ - 8N² + 6N]·τ`.
pub fn complexity_estimate(params: &WaveformParams, tau: usize) -> Result<u128> {
    let n = params.n() as i128;
    let k = params.subcarriers() as i128;
    let half_j = (params.order() / 2) as i128;
    let overflow = || Error::ComplexityOverflow;
    let cube = n.checked_pow(3).ok_or_else(overflow)?;
    let sq = n * n;
    let poly = 8 * cube - 4 * sq * k - 8 * sq + 2 * n * k + 2 * n;
    let exp = u32::try_from(n - 1).map_err(|_| overflow())?;
    let power = half_j.checked_pow(exp).ok_or_else(overflow)?;
    let body = poly
        .checked_mul(power)
        .and_then(|v| v.checked_add(2 * cube - 8 * sq + 6 * n))
        .ok_or_else(overflow)?;
    let total = body.checked_mul(tau as i128).ok_or_else(overflow)?;
    u128::try_from(total).map_err(|_| overflow())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityReport {
    pub formula_count: u128,
    pub measured_multiplications: u64,
}

/// Formula count next to the instrumented count from one noiseless frame over an
/// identity channel.
pub fn complexity_report(params: &WaveformParams, tau: usize) -> Result<ComplexityReport> {
    use crate::channel::{apply_channel, awgn, equivalent_matrices};
    use crate::waveform::{linear_gfdm_matrices, map_bits, modulate_linear_gfdm};

    let formula_count = complexity_estimate(params, tau)?;
    let alphabet = SymbolAlphabet::qam(params.order())?;
    let (a_i, a_q) = linear_gfdm_matrices(params)?;
    let frame = map_bits(&vec![0; params.bits_per_frame()], &alphabet, params)?;
    let x = modulate_linear_gfdm(&frame, &a_i, &a_q)?;
    let ch = awgn(x.len());
    let y = apply_channel(&x, &ch, &mut crate::rng::frame_rng(0, 0))?;
    let psi = equivalent_matrices(ch.matrix(), &a_i, &a_q)?;
    let out = SpaReceiver::new(&psi)?.run(&y, &alphabet, tau, ReceiverMode::Combined)?;
    Ok(ComplexityReport {
        formula_count,
        measured_multiplications: out.multiplications(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    const BPSK: [f64; 2] = [-FRAC_1_SQRT_2, FRAC_1_SQRT_2];

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(n: usize) -> CMatrix {
        CMatrix::identity(n)
    }

    #[test]
    fn diagonal_graph_is_forest() {
        let g = build_factor_graph(&diag(4), DEFAULT_EPSILON).unwrap();
        assert_eq!(g.factor_count(), 4);
        assert_eq!(g.variable_count(), 4);
        assert!((0..4).all(|f| g.factor_degree(f) == 1));
        assert_eq!(g.girth(), None);
    }

    #[test]
    fn all_zero_matrix_is_rejected() {
        assert!(matches!(
            build_factor_graph(&CMatrix::zeros(3, 3), DEFAULT_EPSILON),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn scaling_keeps_adjacency() {
        let m = CMatrix::from_fn(4, 3, |r, k| if (r + k) % 2 == 0 { c(0.3, -0.1) } else { c(0.0, 0.0) });
        let g = build_factor_graph(&m, DEFAULT_EPSILON).unwrap();
        for s in [c(1e-9, 0.0), c(-3.0, 2.0), c(1e6, 0.0)] {
            let gs = build_factor_graph(&m.scale(s), DEFAULT_EPSILON).unwrap();
            assert!(g.same_structure(&gs));
        }
    }

    #[test]
    fn four_cycle_girth() {
        let m = CMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        let g = build_factor_graph(&m, DEFAULT_EPSILON).unwrap();
        assert_eq!(g.girth(), Some(4));
        let chain = CMatrix::from_fn(3, 3, |r, k| if r == k || r == k + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert_eq!(build_factor_graph(&chain, DEFAULT_EPSILON).unwrap().girth(), None);
        // f0-{v0,v1}, f1-{v1,v2}, f2-{v2,v0}: one 6-cycle
        let tri = CMatrix::from_fn(3, 3, |r, k| if k == r || k == (r + 1) % 3 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert_eq!(build_factor_graph(&tri, DEFAULT_EPSILON).unwrap().girth(), Some(6));
    }

    #[test]
    fn degree_one_factor_message() {
        let m = CMatrix::from_fn(1, 1, |_, _| c(1.0, 0.0));
        let g = build_factor_graph(&m, DEFAULT_EPSILON).unwrap();
        let mut out = vec![0.0; 2];
        let v2f = vec![0.5; 2];
        factor_messages(&g, 0, c(1.0, 0.0), &BPSK, &v2f, &mut out);
        // kernels exp(-(1+0.7071)^2) for -1/√2 and exp(-(1-0.7071)^2) for +1/√2,
        // up to the common shift exp(min energy)
        let raw_minus = (-(1.0 + FRAC_1_SQRT_2).powi(2)).exp();
        let raw_plus = (-(1.0 - FRAC_1_SQRT_2).powi(2)).exp();
        assert!((raw_plus - 0.9178).abs() < 1e-4);
        assert!((raw_minus - 0.0542).abs() < 1e-4);
        assert!((out[0] / out[1] - raw_minus / raw_plus).abs() < 1e-12);

        let mut state = MessageState::new(&g, 2, 1);
        factor_to_variable(&mut state, &g, &[c(1.0, 0.0)], &BPSK).unwrap();
        let norm = raw_minus + raw_plus;
        assert!((state.f2v(0)[0] - raw_minus / norm).abs() < 1e-12);
        assert!((state.f2v(0)[1] - raw_plus / norm).abs() < 1e-12);
    }

    #[test]
    fn symmetric_factor_gives_symmetric_messages() {
        let m = CMatrix::from_fn(1, 3, |_, k| Complex64::from_polar(0.8, k as f64));
        let g = build_factor_graph(&m, DEFAULT_EPSILON).unwrap();
        let mut state = MessageState::new(&g, 2, 1);
        factor_to_variable(&mut state, &g, &[c(0.0, 0.0)], &BPSK).unwrap();
        for e in 0..3 {
            let msg = state.f2v(e);
            assert!((msg[0] - msg[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn enumeration_term_count() {
        let alphabet = [-3.0, -1.0, 1.0, 3.0];
        for degree in 1..=4 {
            let m = CMatrix::from_fn(1, degree, |_, _| c(0.5, 0.1));
            let g = build_factor_graph(&m, DEFAULT_EPSILON).unwrap();
            let v2f = vec![0.25; degree * 4];
            let mut out = vec![0.0; degree * 4];
            let stats = factor_messages(&g, 0, c(0.2, 0.0), &alphabet, &v2f, &mut out);
            // per output value: 4^(d-1) summands; d edges x 4 values
            let per_value = 4u64.pow(degree as u32 - 1);
            assert_eq!(stats.terms, degree as u64 * 4 * per_value);
        }
    }

    #[test]
    fn variable_update_rules() {
        // one variable, three factors
        let m = CMatrix::from_fn(3, 1, |_, _| c(1.0, 0.0));
        let g = build_factor_graph(&m, DEFAULT_EPSILON).unwrap();
        let mut state = MessageState::new(&g, 2, 1);
        state.f2v_mut(0).copy_from_slice(&[0.8, 0.2]);
        state.f2v_mut(1).copy_from_slice(&[0.5, 0.5]);
        state.f2v_mut(2).copy_from_slice(&[0.3, 0.7]);
        variable_to_factor(&mut state, &g);
        let out = state.v2f(2);
        assert!((out[0] - 0.8).abs() < 1e-12 && (out[1] - 0.2).abs() < 1e-12);

        // scale invariance
        let mut scaled = state.clone();
        scaled.f2v_mut(0).iter_mut().for_each(|v| *v *= 4.0);
        scaled.f2v_mut(1).iter_mut().for_each(|v| *v *= 0.125);
        variable_to_factor(&mut scaled, &g);
        for e in 0..3 {
            assert_eq!(scaled.v2f(e), state.v2f(e));
        }
        let mut odd = state.clone();
        odd.f2v_mut(2).iter_mut().for_each(|v| *v *= 3.7);
        variable_to_factor(&mut odd, &g);
        for e in 0..3 {
            for a in 0..2 {
                assert!((odd.v2f(e)[a] - state.v2f(e)[a]).abs() < 1e-12);
            }
        }

        // degree-1 variable: empty product
        let single = build_factor_graph(&diag(1), DEFAULT_EPSILON).unwrap();
        let mut s = MessageState::new(&single, 2, 1);
        s.f2v_mut(0).copy_from_slice(&[0.9, 0.1]);
        variable_to_factor(&mut s, &single);
        assert_eq!(s.v2f(0), &[0.5, 0.5]);
    }

    #[test]
    fn underflow_is_floored() {
        let mut msg = [1.0, 1e-320, 0.0];
        assert!(normalize(&mut msg));
        assert!(msg.iter().all(|&v| v > 0.0));
        assert!((msg.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut zero = [0.0, 0.0];
        assert!(normalize(&mut zero));
        assert_eq!(zero, [0.5, 0.5]);
    }

    #[test]
    fn far_observation_does_not_underflow_to_nan() {
        let m = CMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        let g = build_factor_graph(&m, DEFAULT_EPSILON).unwrap();
        let y = [c(1e5, -3e4), c(-2e5, 1e5)];
        let res = run_component(&g, &y, &BPSK, 3, false).unwrap();
        for p in res.marginals.iter() {
            assert!(p.iter().all(|v| v.is_finite() && *v >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn map_decisions() {
        let alphabet = SymbolAlphabet::qam(4).unwrap();
        let mi = Marginals::from_rows(vec![vec![0.9, 0.1], vec![0.5, 0.5], vec![0.2, 0.8]]);
        let mq = Marginals::from_rows(vec![vec![0.1, 0.9], vec![0.5, 0.5], vec![0.6, 0.4]]);
        let frame = map_decide(&mi, &mq, &alphabet).unwrap();
        let s = frame.symbols();
        assert_eq!(s[0], c(-FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        assert_eq!(s[1], c(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2));
        assert_eq!(s[2], c(FRAC_1_SQRT_2, -FRAC_1_SQRT_2));
        assert!(s.iter().all(|z| alphabet.points().contains(z)));
        let short = Marginals::from_rows(vec![vec![0.5, 0.5]]);
        assert!(map_decide(&mi, &short, &alphabet).is_err());
    }

    #[test]
    fn zero_iterations_rejected() {
        let g = build_factor_graph(&diag(2), DEFAULT_EPSILON).unwrap();
        assert!(matches!(
            run_component(&g, &[c(0.0, 0.0); 2], &BPSK, 0, false),
            Err(Error::ZeroIterations)
        ));
    }

    #[test]
    fn trace_rows() {
        let m = CMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        let g = build_factor_graph(&m, DEFAULT_EPSILON).unwrap();
        let res = run_component(&g, &[c(0.3, 0.0), c(-0.1, 0.0)], &BPSK, 2, true).unwrap();
        assert_eq!(res.trace.len(), 4 * 2 * 2);
        let csv = trace_to_csv(&res.trace);
        assert!(csv.starts_with("edge,iteration,alphabet_index,value\n"));
        assert_eq!(csv.lines().count(), 17);
    }

    #[test]
    fn complexity_values() {
        let p = WaveformParams::table1();
        assert_eq!(complexity_estimate(&p, 1).unwrap(), 38_196);
        assert_eq!(complexity_estimate(&p, 7).unwrap(), 267_372);
        let huge = WaveformParams::new(64, 4, 4, crate::waveform::FilterKind::Rect).unwrap();
        assert!(matches!(
            complexity_estimate(&huge, 1),
            Err(Error::ComplexityOverflow)
        ));
    }

    #[test]
    fn complexity_grows_like_half_j_power() {
        // N = 2M with K = 2: ratio C(N+2)/C(N) -> (J/2)^2
        let ratio = |m: usize| {
            let a = WaveformParams::new(2, m, 4, crate::waveform::FilterKind::Rect).unwrap();
            let b = WaveformParams::new(2, m + 1, 4, crate::waveform::FilterKind::Rect).unwrap();
            complexity_estimate(&b, 1).unwrap() as f64 / complexity_estimate(&a, 1).unwrap() as f64
        };
        let r20 = ratio(20);
        let r40 = ratio(40);
        assert!((r40 - 4.0).abs() < (r20 - 4.0).abs());
        assert!((r40 - 4.0).abs() / 4.0 < 0.2);
    }

    #[test]
    fn measured_multiplications_grow_with_tau() {
        let p = WaveformParams::table1();
        let counts: Vec<u64> = (1..=4)
            .map(|t| complexity_report(&p, t).unwrap().measured_multiplications)
            .collect();
        assert!(counts.windows(2).all(|w| w[0] < w[1]));
        let step = counts[1] - counts[0];
        assert!(counts.windows(2).all(|w| w[1] - w[0] == step));
    }
}
