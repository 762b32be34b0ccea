//! Exact maximum-likelihood decoding of coset codes on an additive-noise
//! channel.
//!
//! Given `y = s G + q + N`, the decoder returns the message maximizing
//! `prod_t P_N(y_t - x_t(s))`. Candidates whose log-likelihood is within
//! [`TIE_TOLERANCE`] of the best are treated as tied and the lexicographically
//! smallest message wins. If every candidate has likelihood zero the outcome
//! is [`DecodeOutcome::Failure`].
//!
//! Two exact search strategies produce the same answer:
//!
//! * **Exhaustive**: walks all `p^k` messages.
//! * **Information set**: puts `G` in systematic form, so a codeword is fixed
//!   by its values on `rank G` information positions. Noise patterns on those
//!   positions are enumerated in order of increasing cost (negative
//!   log-likelihood), and the search stops once the cost on the information
//!   positions alone exceeds the best total cost found. This visits a tiny
//!   fraction of the space when the noise is mild.
//!
//! Both count evaluated candidates against a budget and return
//! [`Error::BudgetExceeded`] rather than run unbounded.

use serde::{Deserialize, Serialize};

use rustc_hash::FxHashMap;

use super::systematic::SystematicForm;
use super::LinearCode;
use crate::entropy::NoisePmf;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldMatrix, FieldSpec};

pub const DEFAULT_CANDIDATE_BUDGET: u64 = 1 << 20;

/// Log-likelihood gap below which two candidates count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// `Auto` enumerates outright when the message space is at most this large.
const EXHAUSTIVE_AUTO_LIMIT: u128 = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    #[default]
    Auto,
    Exhaustive,
    InformationSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderConfig {
    /// Maximum number of candidates evaluated per decode.
    pub candidate_budget: u64,
    pub strategy: SearchStrategy,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
            strategy: SearchStrategy::Auto,
        }
    }
}

impl DecoderConfig {
    pub fn with_budget(candidate_budget: u64) -> Self {
        DecoderConfig {
            candidate_budget,
            ..DecoderConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(Vec<FieldElem>),
    /// Every candidate has zero likelihood under the noise pmf.
    Failure,
}

impl DecodeOutcome {
    pub fn message(&self) -> Option<&[FieldElem]> {
        match self {
            DecodeOutcome::Decoded(m) => Some(m),
            DecodeOutcome::Failure => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, DecodeOutcome::Failure)
    }
}

/// Message positions whose values are known to the decoder in advance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateRestriction {
    fixed: Vec<(usize, FieldElem)>,
}

impl CandidateRestriction {
    pub fn none() -> Self {
        CandidateRestriction::default()
    }

    pub fn new(positions: &[usize], values: &[FieldElem]) -> Result<Self> {
        if positions.len() != values.len() {
            return Err(Error::DimensionMismatch {
                context: "restriction values",
                expected: positions.len(),
                found: values.len(),
            });
        }
        let mut fixed: Vec<(usize, FieldElem)> =
            positions.iter().copied().zip(values.iter().copied()).collect();
        fixed.sort_by_key(|&(pos, _)| pos);
        if fixed.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("restricted positions must be distinct"));
        }
        Ok(CandidateRestriction { fixed })
    }

    /// Fixes the contiguous block `start..start + values.len()`.
    pub fn from_block(start: usize, values: &[FieldElem]) -> Self {
        CandidateRestriction {
            fixed: values.iter().enumerate().map(|(i, &v)| (start + i, v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.fixed.iter().map(|&(pos, _)| pos)
    }

    fn validate(&self, k: usize, field: FieldSpec) -> Result<()> {
        for &(pos, value) in &self.fixed {
            if pos >= k {
                return Err(Error::invalid(format!(
                    "restricted position {pos} out of range for k={k}"
                )));
            }
            field.check(value.field())?;
        }
        Ok(())
    }
}

pub fn ml_decode(
    code: &LinearCode,
    y: &[FieldElem],
    noise: &NoisePmf,
    config: &DecoderConfig,
) -> Result<DecodeOutcome> {
    ml_decode_restricted(code, y, noise, &CandidateRestriction::none(), config)
}

/// ML decoding over the messages that agree with `restriction`.
///
/// With every position fixed the fixed message is returned whatever `y` is.
pub fn ml_decode_restricted(
    code: &LinearCode,
    y: &[FieldElem],
    noise: &NoisePmf,
    restriction: &CandidateRestriction,
    config: &DecoderConfig,
) -> Result<DecodeOutcome> {
    let field = code.field();
    let (k, n) = (code.k(), code.n());
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            context: "received word length",
            expected: n,
            found: y.len(),
        });
    }
    field.check(noise.field())?;
    restriction.validate(k, field)?;

    let mut target = field.lower(y)?;
    for (t, &q) in target.iter_mut().zip(code.offset_raw()) {
        *t = field.sub_raw(*t, q);
    }
    let mut message = vec![0u32; k];
    let mut is_fixed = vec![false; k];
    for &(pos, value) in &restriction.fixed {
        message[pos] = value.value();
        is_fixed[pos] = true;
        field.axpy_raw(&mut target, field.neg_raw(value.value()), code.generator().row_raw(pos));
    }
    let free: Vec<usize> = (0..k).filter(|&i| !is_fixed[i]).collect();
    if free.is_empty() {
        return Ok(DecodeOutcome::Decoded(field.lift(&message)));
    }
    let g = code.generator().select_rows(&free);

    let costs = NoiseCosts::new(noise);
    let strategy = match config.strategy {
        SearchStrategy::Auto => {
            let space = checked_power(field.order(), free.len());
            if space <= EXHAUSTIVE_AUTO_LIMIT || costs.has_free_alternative() {
                SearchStrategy::Exhaustive
            } else {
                SearchStrategy::InformationSet
            }
        }
        other => other,
    };
    let found = match strategy {
        SearchStrategy::Exhaustive => exhaustive(&g, &target, &costs, config.candidate_budget)?,
        _ => information_set(&g, &target, &costs, config.candidate_budget)?,
    };
    Ok(match found {
        Some(sub) => {
            for (&pos, v) in free.iter().zip(sub) {
                message[pos] = v;
            }
            DecodeOutcome::Decoded(field.lift(&message))
        }
        None => DecodeOutcome::Failure,
    })
}

fn checked_power(p: u32, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(u128::from(p));
    }
    acc
}

fn budget_error(needed: u128, budget: u64) -> Error {
    Error::BudgetExceeded {
        context: "ML decode".into(),
        needed,
        budget,
    }
}

/// Per-symbol costs `ln P(b) - ln P(v)` relative to the most likely noise
/// value `b` (smallest such symbol on ties); infinite where `P(v) = 0`.
struct NoiseCosts {
    base: u32,
    cost: Vec<f64>,
    /// Finite-cost alternatives to `base`, cheapest first.
    deviations: Vec<(u32, f64)>,
}

impl NoiseCosts {
    fn new(noise: &NoisePmf) -> Self {
        let probs = noise.probs();
        let mut base = 0;
        for (v, &pr) in probs.iter().enumerate() {
            if pr > probs[base] {
                base = v;
            }
        }
        let top = probs[base].ln();
        let cost: Vec<f64> = probs
            .iter()
            .map(|&pr| if pr > 0.0 { top - pr.ln() } else { f64::INFINITY })
            .collect();
        let mut deviations: Vec<(u32, f64)> = cost
            .iter()
            .enumerate()
            .filter(|&(v, c)| v != base && c.is_finite())
            .map(|(v, &c)| (v as u32, c))
            .collect();
        deviations.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        NoiseCosts {
            base: base as u32,
            cost,
            deviations,
        }
    }

    fn has_free_alternative(&self) -> bool {
        self.deviations.first().is_some_and(|&(_, c)| c <= 0.0)
    }
}

/// Collects candidates within the tie tolerance of the best cost seen.
struct Ties<T> {
    best: f64,
    entries: Vec<(f64, T)>,
}

impl<T> Ties<T> {
    fn new() -> Self {
        Ties {
            best: f64::INFINITY,
            entries: Vec::new(),
        }
    }

    fn bound(&self) -> f64 {
        self.best + TIE_TOLERANCE
    }

    fn offer(&mut self, cost: f64, item: impl FnOnce() -> T) {
        if !cost.is_finite() || cost > self.bound() {
            return;
        }
        if cost < self.best {
            self.best = cost;
            let bound = self.bound();
            self.entries.retain(|(c, _)| *c <= bound);
        }
        self.entries.push((cost, item()));
    }
}

/// Walks every message in lexicographic order. The codeword is updated
/// incrementally: bumping digit `j` always adds row `j` of `G`.
fn exhaustive(g: &FieldMatrix, target: &[u32], costs: &NoiseCosts, budget: u64) -> Result<Option<Vec<u32>>> {
    let field = g.field();
    let (k, n) = (g.rows(), g.cols());
    let space = checked_power(field.order(), k);
    if space > u128::from(budget) {
        return Err(budget_error(space, budget));
    }
    let mut msg = vec![0u32; k];
    let mut cw = vec![0u32; n];
    let mut ties = Ties::new();
    loop {
        let bound = ties.bound();
        let mut total = 0.0;
        for (&t, &c) in target.iter().zip(&cw) {
            total += costs.cost[field.sub_raw(t, c) as usize];
            if total > bound {
                break;
            }
        }
        ties.offer(total, || msg.clone());

        let mut j = k;
        loop {
            if j == 0 {
                // Enumeration order is lexicographic, so the first tie is the
                // smallest message.
                return Ok(ties.entries.into_iter().next().map(|(_, m)| m));
            }
            j -= 1;
            msg[j] = field.add_raw(msg[j], 1);
            field.axpy_raw(&mut cw, 1, g.row_raw(j));
            if msg[j] != 0 {
                break;
            }
        }
    }
}

fn information_set(
    g: &FieldMatrix,
    target: &[u32],
    costs: &NoiseCosts,
    budget: u64,
) -> Result<Option<Vec<u32>>> {
    let sys = SystematicForm::new(g);
    let field = g.field();
    let b = costs.base;

    // Noise pattern on the information set, as (position, value) deviations
    // from the all-`b` pattern.
    let patterns: Vec<(f64, Vec<(usize, u32)>)> = if field.order() == 2
        && sys.parity.len() <= 128
        && !costs.has_free_alternative()
    {
        binary_search(&sys, target, costs, budget)?
    } else {
        GenericSearch::run(&sys, target, costs, budget)?
    };

    let best = patterns
        .into_iter()
        .map(|(_, devs)| {
            let mut info: Vec<u32> = sys.info.iter().map(|&c| field.sub_raw(target[c], b)).collect();
            for (j, v) in devs {
                info[j] = field.sub_raw(target[sys.info[j]], v);
            }
            sys.message_for(&info)
        })
        .min();
    Ok(best)
}

/// Parity-position residual for the all-`b` information pattern:
/// `target_P - (target_I - b) M_P`.
fn base_residual(sys: &SystematicForm, target: &[u32], b: u32) -> Vec<u32> {
    let field = sys.field;
    let mut acc: Vec<u32> = sys.parity.iter().map(|&c| target[c]).collect();
    for (j, row) in sys.parity_rows.iter().enumerate() {
        let c = field.sub_raw(target[sys.info[j]], b);
        if c != 0 {
            field.axpy_raw(&mut acc, field.neg_raw(c), row);
        }
    }
    acc
}

/// Branch and bound over information-set noise patterns with iterative
/// deepening on the pattern cost. Level `l` evaluates patterns whose cost
/// falls in `((l-1) d, l d]` where `d` is the cheapest deviation, so every
/// pattern is evaluated once and in roughly increasing cost order.
struct GenericSearch<'a> {
    sys: &'a SystematicForm,
    costs: &'a NoiseCosts,
    budget: u64,
    evaluated: u64,
    lo: f64,
    hi: f64,
    deferred: bool,
    residual: Vec<u32>,
    stack: Vec<(usize, u32)>,
    ties: Ties<Vec<(usize, u32)>>,
}

impl<'a> GenericSearch<'a> {
    fn run(
        sys: &'a SystematicForm,
        target: &[u32],
        costs: &'a NoiseCosts,
        budget: u64,
    ) -> Result<Vec<(f64, Vec<(usize, u32)>)>> {
        let mut search = GenericSearch {
            sys,
            costs,
            budget,
            evaluated: 0,
            lo: -1.0,
            hi: 0.0,
            deferred: false,
            residual: base_residual(sys, target, costs.base),
            stack: Vec::new(),
            ties: Ties::new(),
        };
        let step = costs.deviations.iter().map(|&(_, c)| c).find(|&c| c > 0.0);
        let mut level = 0u32;
        loop {
            search.deferred = false;
            search.visit(0, 0.0)?;
            let Some(step) = step else { break };
            if !search.deferred || search.hi > search.ties.bound() {
                break;
            }
            level += 1;
            search.lo = search.hi;
            search.hi = f64::from(level) * step;
        }
        Ok(search.ties.entries)
    }

    fn visit(&mut self, start: usize, partial: f64) -> Result<()> {
        if partial > self.lo {
            self.evaluate(partial)?;
        }
        let field = self.sys.field;
        let base = self.costs.base;
        for j in start..self.sys.rank() {
            for d in 0..self.costs.deviations.len() {
                let (v, c) = self.costs.deviations[d];
                let next = partial + c;
                if next > self.ties.bound() {
                    // Deviations are sorted, and the bound only tightens.
                    if d == 0 {
                        return Ok(());
                    }
                    break;
                }
                if next > self.hi {
                    self.deferred = true;
                    if d == 0 {
                        return Ok(());
                    }
                    break;
                }
                // Noise v instead of b on info position j moves the codeword
                // symbol by (b - v), which shifts the parity residual by
                // (v - b) times row j.
                let delta = field.sub_raw(v, base);
                let row = &self.sys.parity_rows[j];
                field.axpy_raw(&mut self.residual, delta, row);
                self.stack.push((j, v));
                let r = self.visit(j + 1, next);
                self.stack.pop();
                field.axpy_raw(&mut self.residual, field.neg_raw(delta), row);
                r?;
            }
        }
        Ok(())
    }

    fn evaluate(&mut self, partial: f64) -> Result<()> {
        self.evaluated += 1;
        if self.evaluated > self.budget {
            return Err(budget_error(u128::from(self.evaluated), self.budget));
        }
        let bound = self.ties.bound();
        let mut total = partial;
        for &r in &self.residual {
            total += self.costs.cost[r as usize];
            if total > bound {
                return Ok(());
            }
        }
        let stack = &self.stack;
        self.ties.offer(total, || stack.clone());
        Ok(())
    }
}

/// GF(2) specialization: exact minimum-weight syndrome decoding.
///
/// Relative to the most likely noise bit every deviation costs the same, so
/// ML decoding finds the lowest-weight noise pattern `e` whose syndrome
/// matches the received word. Weights are tried in increasing order. A
/// pattern of weight `w` is split, by sorted position, into its first
/// `w / 2` positions and the rest; the first halves are stored by syndrome
/// and the second halves are looked up, so each pattern is found exactly
/// once. Every insertion and lookup counts as an evaluated candidate.
fn binary_search(
    sys: &SystematicForm,
    target: &[u32],
    costs: &NoiseCosts,
    budget: u64,
) -> Result<Vec<(f64, Vec<(usize, u32)>)>> {
    let to_mask = |bits: &[u32]| -> u128 {
        bits.iter()
            .enumerate()
            .fold(0u128, |m, (t, &bit)| m | (u128::from(bit) << t))
    };
    let n = sys.info.len() + sys.parity.len();
    let mut columns = vec![0u128; n];
    let mut info_index = vec![usize::MAX; n];
    for (j, &c) in sys.info.iter().enumerate() {
        columns[c] = to_mask(&sys.parity_rows[j]);
        info_index[c] = j;
    }
    for (t, &c) in sys.parity.iter().enumerate() {
        columns[c] = 1 << t;
    }
    // Flipping every bit when the likely noise value is 1 reduces to the
    // usual minimum-weight problem.
    let syndrome = (0..n)
        .filter(|&c| target[c] ^ costs.base == 1)
        .fold(0u128, |acc, c| acc ^ columns[c]);
    let unit = costs.deviations.first().map(|&(_, c)| c);
    let max_weight = if unit.is_some() { sys.parity.len() } else { 0 };

    let mut search = SyndromeSearch {
        columns,
        budget,
        evaluated: 0,
        hits: Vec::new(),
    };
    let r = sys.info.len();
    let mut left: Option<HalfTable> = None;
    let mut spent = 0.0;
    for w in 0..=max_weight {
        let a = w / 2;
        // Low-dimensional codes are cheaper to search over the information
        // set; hand over once that enumeration costs less than the split
        // search would to reach slightly beyond the current weight.
        spent += choose(n, w - a) + if w % 2 == 0 { choose(n, a) } else { 0.0 };
        let info_cost: f64 = (0..=(w + 2).min(r)).map(|j| choose(r, j)).sum();
        if info_cost <= spent {
            return GenericSearch::run(sys, target, costs, budget - search.evaluated);
        }
        if left.as_ref().map(|t| t.size) != Some(a) {
            left = Some(search.build(a, w - a)?);
        }
        search.probe(left.as_ref().expect("built above"), w - a, syndrome)?;
        if !search.hits.is_empty() {
            let cost = w as f64 * unit.unwrap_or(0.0);
            let flip = 1 - costs.base;
            return Ok(search
                .hits
                .into_iter()
                .map(|positions| {
                    let devs = positions
                        .into_iter()
                        .filter(|&c| info_index[c] != usize::MAX)
                        .map(|c| (info_index[c], flip))
                        .collect();
                    (cost, devs)
                })
                .collect());
        }
    }
    Ok(Vec::new())
}

fn choose(n: usize, k: usize) -> f64 {
    (0..k.min(n)).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// All `size`-subsets of positions, chained by syndrome.
struct HalfTable {
    size: usize,
    positions: Vec<u16>,
    next: Vec<u32>,
    heads: FxHashMap<u128, u32>,
}

const NO_ENTRY: u32 = u32::MAX;

struct SyndromeSearch {
    columns: Vec<u128>,
    budget: u64,
    evaluated: u64,
    hits: Vec<Vec<usize>>,
}

impl SyndromeSearch {
    fn charge(&mut self) -> Result<()> {
        self.evaluated += 1;
        if self.evaluated > self.budget {
            return Err(budget_error(u128::from(self.evaluated), self.budget));
        }
        Ok(())
    }

    /// Subsets of size `size` that leave room for `rest` larger positions.
    fn build(&mut self, size: usize, rest: usize) -> Result<HalfTable> {
        let mut table = HalfTable {
            size,
            positions: Vec::new(),
            next: Vec::new(),
            heads: FxHashMap::default(),
        };
        let limit = self.columns.len().saturating_sub(rest);
        let mut chosen = Vec::with_capacity(size);
        self.fill(&mut table, &mut chosen, 0, limit, 0)?;
        Ok(table)
    }

    fn fill(
        &mut self,
        table: &mut HalfTable,
        chosen: &mut Vec<u16>,
        start: usize,
        limit: usize,
        acc: u128,
    ) -> Result<()> {
        if chosen.len() == table.size {
            self.charge()?;
            let id = table.next.len() as u32;
            table.positions.extend_from_slice(chosen);
            let head = table.heads.entry(acc).or_insert(NO_ENTRY);
            table.next.push(*head);
            *head = id;
            return Ok(());
        }
        let remaining = table.size - chosen.len();
        for c in start..limit.saturating_sub(remaining - 1) {
            chosen.push(c as u16);
            let r = self.fill(table, chosen, c + 1, limit, acc ^ self.columns[c]);
            chosen.pop();
            r?;
        }
        Ok(())
    }

    fn probe(&mut self, left: &HalfTable, size: usize, syndrome: u128) -> Result<()> {
        let mut chosen = Vec::with_capacity(size);
        self.probe_from(left, &mut chosen, size, left.size, syndrome)
    }

    fn probe_from(
        &mut self,
        left: &HalfTable,
        chosen: &mut Vec<usize>,
        size: usize,
        start: usize,
        acc: u128,
    ) -> Result<()> {
        if chosen.len() == size {
            self.charge()?;
            let min = chosen.first().copied().unwrap_or(self.columns.len());
            let mut id = left.heads.get(&acc).copied().unwrap_or(NO_ENTRY);
            while id != NO_ENTRY {
                let first = &left.positions[id as usize * left.size..][..left.size];
                if first.last().is_none_or(|&m| usize::from(m) < min) {
                    let mut pattern: Vec<usize> = first.iter().map(|&c| usize::from(c)).collect();
                    pattern.extend_from_slice(chosen);
                    self.hits.push(pattern);
                }
                id = left.next[id as usize];
            }
            return Ok(());
        }
        let n = self.columns.len();
        let remaining = size - chosen.len();
        for c in start..=(n - remaining) {
            chosen.push(c);
            let r = self.probe_from(left, chosen, size, c + 1, acc ^ self.columns[c]);
            chosen.pop();
            r?;
        }
        Ok(())
    }
}
