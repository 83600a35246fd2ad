//! Minimum distances of the evaluation codes: exhaustive search, low-support
//! upper bounds, and a Brouwer–Zimmermann style exact search over several
//! systematic forms.
//!
//! All searches share one enumeration core: codewords are generated by
//! support size, supports in lexicographic order, with the first nonzero
//! coefficient fixed to 1 (one codeword per scalar class). Each enumerated
//! codeword costs a single vector pass — stepping a coefficient from `c` to
//! `c+1` just adds the row once more — with the Hamming weight counted in the
//! same pass.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::GeneratorMatrix;
use crate::error::Error;
use crate::gf::{AddKind, Field};

/// Hamming weight: number of nonzero entries.
pub fn weight(v: &[u8]) -> u32 {
    v.iter().filter(|&&x| x != 0).count() as u32
}

/// How a codeword of the reported weight was built: `(row, coefficient)`
/// pairs with the first coefficient 1. For the systematic-form search the
/// row indices refer to the searched basis, not the original matrix; the
/// codeword itself always lies in the row space of the original matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub support: Vec<(usize, u8)>,
    pub codeword: Vec<u8>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DistanceKind {
    Exact,
    UpperBound,
}

/// Outcome of a distance computation.
#[derive(Clone, Debug)]
pub struct DistanceResult {
    pub value: u32,
    pub kind: DistanceKind,
    pub witness: Witness,
    /// Support size of the witness combination.
    pub rows_used: u32,
    /// Number of codeword evaluations performed.
    pub effort: u64,
    /// Certified lower bound when the search stopped early.
    pub lower_bound: Option<u32>,
}

/// `(q^k − 1) / (q − 1)`, saturating; the number of scalar classes of
/// nonzero messages.
pub fn scalar_class_count(q: u16, k: usize) -> u128 {
    let mut acc: u128 = 0;
    // Horner form of 1 + q + ... + q^(k-1).
    for _ in 0..k {
        acc = match acc.checked_mul(q as u128).and_then(|v| v.checked_add(1)) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

const LANE_HI: u64 = 0x8080_8080_8080_8080;
const LANE_7F: u64 = 0x7f7f_7f7f_7f7f_7f7f;

/// Pack a byte vector into little-endian u64 lanes, zero-padded.
fn pack_words(bytes: &[u8], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (i, &b) in bytes.iter().enumerate() {
        out[i / 8] |= (b as u64) << (8 * (i % 8));
    }
    out
}

/// Back from lanes to exactly `width` bytes.
fn unpack_words(words: &[u64], width: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(width);
    for i in 0..width {
        out.push((words[i / 8] >> (8 * (i % 8))) as u8);
    }
    out
}

/// Shared support-DFS over `k` rows of a flattened matrix, `width` columns.
///
/// Every nonzero scalar multiple of every row is precomputed once, and all
/// vectors live as packed u64 lanes (8 field codes per word, valid because
/// codes stay below 64 so lanes never carry). Each enumerated codeword then
/// costs one fused add-and-count pass over `width/8` words: the buffer for
/// support level `l` is the level `l−1` buffer plus the scaled row chosen at
/// level `l`.
struct Enumerator<'a> {
    /// `k × (q−1) × words`: multiples of each row by 1..q−1, packed.
    scaled: Vec<u64>,
    words: usize,
    width: usize,
    k: usize,
    q: usize,
    kind: AddKind,
    add: &'a [u8],
    bufs: Vec<Vec<u64>>,
    support: Vec<(usize, u8)>,
    effort: u64,
}

impl<'a> Enumerator<'a> {
    fn new(data: &'a [u8], width: usize, k: usize, f: &'a Field, max_size: usize) -> Self {
        let q = f.q() as usize;
        let words = width.div_ceil(8).max(1);
        let mut scaled = vec![0u64; k * (q - 1) * words];
        let mut row_bytes = vec![0u8; width];
        for row in 0..k {
            for coef in 1..q {
                for j in 0..width {
                    row_bytes[j] = f.mul(coef as u8, data[row * width + j]);
                }
                let at = (row * (q - 1) + coef - 1) * words;
                scaled[at..at + words].copy_from_slice(&pack_words(&row_bytes, words));
            }
        }
        Enumerator {
            scaled,
            words,
            width,
            k,
            q,
            kind: f.add_kind(),
            add: f.add_table(),
            bufs: vec![vec![0u64; words]; max_size + 1],
            support: Vec::with_capacity(max_size),
            effort: 0,
        }
    }

    /// `bufs[level+1] = bufs[level] + coef·row`, returning the new weight.
    #[inline]
    fn place(&mut self, level: usize, row: usize, coef: u8) -> u32 {
        let (lo, hi) = self.bufs.split_at_mut(level + 1);
        let src = &lo[level][..self.words];
        let dst = &mut hi[0][..self.words];
        let at = (row * (self.q - 1) + coef as usize - 1) * self.words;
        let r = &self.scaled[at..at + self.words];
        let mut w = 0u32;
        match self.kind {
            AddKind::Xor => {
                for j in 0..self.words {
                    let s = src[j] ^ r[j];
                    dst[j] = s;
                    w += ((s + LANE_7F) & LANE_HI).count_ones();
                }
            }
            AddKind::ModPrime(q) => {
                let shift = u64::from_ne_bytes([128 - q; 8]);
                for j in 0..self.words {
                    let t = src[j] + r[j];
                    let over = ((t + shift) & LANE_HI) >> 7;
                    let s = t - over * q as u64;
                    dst[j] = s;
                    w += ((s + LANE_7F) & LANE_HI).count_ones();
                }
            }
            AddKind::Table => {
                for j in 0..self.words {
                    let a = src[j].to_le_bytes();
                    let b = r[j].to_le_bytes();
                    let mut s = [0u8; 8];
                    for l in 0..8 {
                        s[l] = self.add[(a[l] as usize) * self.q + b[l] as usize];
                        w += (s[l] != 0) as u32;
                    }
                    dst[j] = u64::from_le_bytes(s);
                }
            }
        }
        w
    }

    /// Codeword bytes for the buffer at support level `len` (materialized on
    /// demand, e.g. when a witness improves).
    fn codeword_at(&self, level: usize) -> Vec<u8> {
        unpack_words(&self.bufs[level], self.width)
    }

    /// Visit every scalar class of codewords supported on exactly `size`
    /// rows. Returns false if `visit` aborted the scan.
    fn run_size<F: FnMut(u32, &Enumerator<'_>) -> bool>(
        &mut self,
        size: usize,
        visit: &mut F,
    ) -> bool {
        if size > self.k {
            return true;
        }
        self.rec(size, 0, 0, visit)
    }

    fn rec<F: FnMut(u32, &Enumerator<'_>) -> bool>(
        &mut self,
        size: usize,
        level: usize,
        first: usize,
        visit: &mut F,
    ) -> bool {
        let last = self.k - (size - level - 1);
        for i in first..last {
            // First support slot is normalized to coefficient 1.
            let max_coef = if level == 0 { 1 } else { self.q as u8 - 1 };
            self.support.push((i, 1));
            for coef in 1..=max_coef {
                self.support.last_mut().expect("support nonempty").1 = coef;
                let w = self.place(level, i, coef);
                self.effort += 1;
                let go = if level + 1 == size {
                    visit(w, self)
                } else {
                    self.rec(size, level + 1, i + 1, visit)
                };
                if !go {
                    self.support.pop();
                    return false;
                }
            }
            self.support.pop();
        }
        true
    }
}

/// Run `visit(weight, support, codeword)` over every scalar class of nonzero
/// codewords supported on at most `max_rows` rows of `g`, in increasing
/// support size. Returns false if the visitor stopped the scan. The codeword
/// is materialized for every visit; the specialized searches below avoid
/// that cost and should be preferred where they fit.
pub fn for_each_low_support_weight(
    g: &GeneratorMatrix,
    f: &Field,
    max_rows: u32,
    visit: &mut dyn FnMut(u32, &[(usize, u8)], &[u8]) -> bool,
) -> bool {
    let data: Vec<u8> = g.rows().flatten().copied().collect();
    let max = (max_rows as usize).min(g.k());
    let mut en = Enumerator::new(&data, g.n(), g.k(), f, max);
    for size in 1..=max {
        if !en.run_size(size, &mut |w, en| {
            visit(w, &en.support, &en.codeword_at(en.support.len()))
        }) {
            return false;
        }
    }
    true
}

struct Best {
    value: u32,
    witness: Option<Witness>,
    rows_used: u32,
}

impl Best {
    fn new() -> Best {
        Best { value: u32::MAX, witness: None, rows_used: 0 }
    }

    /// The codeword is only materialized when the offer improves.
    fn offer(&mut self, w: u32, support: &[(usize, u8)], codeword: impl FnOnce() -> Vec<u8>) {
        if w > 0 && w < self.value {
            self.value = w;
            self.rows_used = support.len() as u32;
            self.witness = Some(Witness { support: support.to_vec(), codeword: codeword() });
        }
    }
}

/// Exact minimum distance by exhaustive scalar-class enumeration.
///
/// Requires `(q^k − 1)/(q − 1) ≤ budget`; otherwise fails with
/// `BudgetExceeded`, signalling that the systematic-form search or a
/// low-support bound should be used instead.
pub fn exact_min_distance(
    g: &GeneratorMatrix,
    f: &Field,
    budget: u64,
) -> Result<DistanceResult, Error> {
    let classes = scalar_class_count(f.q(), g.k());
    if classes > budget as u128 {
        return Err(Error::BudgetExceeded { needed: classes, budget: budget as u128 });
    }
    let data: Vec<u8> = g.rows().flatten().copied().collect();
    let mut en = Enumerator::new(&data, g.n(), g.k(), f, g.k());
    let mut best = Best::new();
    for size in 1..=g.k() {
        let done = en.run_size(size, &mut |w, en| {
            best.offer(w, &en.support, || en.codeword_at(en.support.len()));
            best.value > 1
        });
        if !done {
            break; // the floor weight 1 was reached
        }
    }
    let witness = best.witness.expect("a nonzero code has a nonzero codeword");
    Ok(DistanceResult {
        value: best.value,
        kind: DistanceKind::Exact,
        witness,
        rows_used: best.rows_used,
        effort: en.effort,
        lower_bound: None,
    })
}

/// Upper bound `d_b(r)`: minimum weight over codewords supported on at most
/// `r` rows. Exact (equal to `d`) once `r ≥ k`.
pub fn row_combo_bound(g: &GeneratorMatrix, f: &Field, r: u32) -> DistanceResult {
    let data: Vec<u8> = g.rows().flatten().copied().collect();
    let max = (r as usize).min(g.k());
    let mut en = Enumerator::new(&data, g.n(), g.k(), f, max);
    let mut best = Best::new();
    for size in 1..=max {
        let done = en.run_size(size, &mut |w, en| {
            best.offer(w, &en.support, || en.codeword_at(en.support.len()));
            best.value > 1
        });
        if !done {
            break;
        }
    }
    DistanceResult {
        value: best.value,
        kind: if r as usize >= g.k() { DistanceKind::Exact } else { DistanceKind::UpperBound },
        witness: best.witness.expect("single rows are nonzero"),
        rows_used: best.rows_used,
        effort: en.effort,
        lower_bound: None,
    }
}

/// Smallest `r ≤ r_max` whose bound `d_b(r)` drops below `target`, if any.
pub fn rows_needed_to_disqualify(
    g: &GeneratorMatrix,
    f: &Field,
    target: u32,
    r_max: u32,
) -> Option<u32> {
    let data: Vec<u8> = g.rows().flatten().copied().collect();
    let max = (r_max as usize).min(g.k());
    let mut en = Enumerator::new(&data, g.n(), g.k(), f, max);
    let mut best = u32::MAX;
    for size in 1..=max {
        en.run_size(size, &mut |w, _| {
            if w > 0 && w < best {
                best = w;
            }
            best >= target
        });
        if best < target {
            return Some(size as u32);
        }
    }
    None
}

/// One systematic form: the matrix row-reduced so that a set of `rank`
/// pivot columns carries an identity on rows `0..rank` and zeros below.
struct SystematicForm {
    rows: Vec<u8>, // k × n
    rank: usize,
    /// Row restriction to the non-pivot columns, k × (n − rank).
    np_rows: Vec<u8>,
    np_width: usize,
}

fn systematic_forms(g: &GeneratorMatrix, f: &Field) -> Result<Vec<SystematicForm>, Error> {
    let (k, n) = (g.k(), g.n());
    let mut used = vec![false; n];
    let mut forms = Vec::new();
    loop {
        let mut m: Vec<u8> = g.rows().flatten().copied().collect();
        let mut rank = 0usize;
        let mut pivot_cols = Vec::new();
        for col in 0..n {
            if used[col] || rank == k {
                continue;
            }
            let Some(pr) = (rank..k).find(|&r| m[r * n + col] != 0) else {
                continue;
            };
            if pr != rank {
                for j in 0..n {
                    m.swap(rank * n + j, pr * n + j);
                }
            }
            let inv = f.inv(m[rank * n + col]).expect("pivot nonzero");
            for j in 0..n {
                m[rank * n + j] = f.mul(m[rank * n + j], inv);
            }
            for r in 0..k {
                let c = m[r * n + col];
                if r != rank && c != 0 {
                    for j in 0..n {
                        let s = f.mul(c, m[rank * n + j]);
                        m[r * n + j] = f.sub(m[r * n + j], s);
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
        if forms.is_empty() && rank < k {
            return Err(Error::RankDeficient { rank, k });
        }
        if rank == 0 {
            break;
        }
        for &c in &pivot_cols {
            used[c] = true;
        }
        let np_cols: Vec<usize> = (0..n).filter(|j| !pivot_cols.contains(j)).collect();
        let mut np_rows = vec![0u8; k * np_cols.len()];
        for r in 0..k {
            for (jj, &j) in np_cols.iter().enumerate() {
                np_rows[r * np_cols.len() + jj] = m[r * n + j];
            }
        }
        forms.push(SystematicForm { rows: m, rank, np_rows, np_width: np_cols.len() });
    }
    Ok(forms)
}

fn form_codeword(form: &SystematicForm, f: &Field, n: usize, support: &[(usize, u8)]) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for &(row, coef) in support {
        for (o, &g) in out.iter_mut().zip(&form.rows[row * n..(row + 1) * n]) {
            *o = f.add(*o, f.mul(coef, g));
        }
    }
    out
}

/// Exact minimum distance by staged enumeration over several disjoint
/// systematic forms, following the standard multi-information-set argument:
/// after all messages of weight ≤ w have been enumerated against every form,
/// any remaining codeword has weight at least
/// `Σ_t max(0, w + 1 − (k − rank_t))`. The search stops as soon as this
/// lower bound meets the best weight seen.
///
/// `stop` is polled periodically with the effort so far; returning `true`
/// aborts the search, which then reports the best upper bound found together
/// with the certified lower bound, flagged as `UpperBound`.
pub fn bz_min_distance(
    g: &GeneratorMatrix,
    f: &Field,
    stop: &mut dyn FnMut(u64) -> bool,
) -> Result<DistanceResult, Error> {
    let (k, n) = (g.k(), g.n());
    let forms = systematic_forms(g, f)?;
    let mut ub = Best::new();
    // Seed with the first row so even an immediate stop reports a bound.
    ub.offer(weight(g.row(0)), &[(0, 1)], || g.row(0).to_vec());
    let mut completed = vec![0u32; forms.len()];
    let mut effort: u64 = 0;
    let lower = |completed: &[u32]| -> u32 {
        forms
            .iter()
            .zip(completed)
            .map(|(form, &w)| (w + 1).saturating_sub((k - form.rank) as u32))
            .sum()
    };
    let mut stopped = false;
    'stages: for w in 1..=k {
        for (t, form) in forms.iter().enumerate() {
            let mut en = Enumerator::new(&form.np_rows, form.np_width, k, f, w);
            let rank = form.rank;
            let done = en.run_size(w, &mut |npw, en| {
                let support = &en.support;
                let pivot_wt = support.iter().filter(|&&(i, _)| i < rank).count() as u32;
                let total = npw + pivot_wt;
                debug_assert!(total > 0, "full-rank forms have no hidden zero codewords");
                if total < ub.value {
                    let cw = form_codeword(form, f, n, support);
                    debug_assert_eq!(weight(&cw), total);
                    ub.offer(total, support, || cw.clone());
                }
                if en.effort % (1 << 16) == 0 && stop(effort + en.effort) {
                    return false;
                }
                true
            });
            effort += en.effort;
            if !done {
                stopped = true;
                break 'stages;
            }
            completed[t] = w as u32;
            if lower(&completed) >= ub.value {
                break 'stages;
            }
        }
    }
    let lb = lower(&completed).min(ub.value);
    let exact = !stopped && lb >= ub.value;
    Ok(DistanceResult {
        value: ub.value,
        kind: if exact { DistanceKind::Exact } else { DistanceKind::UpperBound },
        witness: ub.witness.expect("seeded with the first row"),
        rows_used: ub.rows_used,
        effort,
        lower_bound: if exact { None } else { Some(lb) },
    })
}

/// Check that a witness codeword lies in the row space of `g` and has the
/// claimed weight.
pub fn verify_witness(g: &GeneratorMatrix, f: &Field, w: &Witness, claimed: u32) -> bool {
    if weight(&w.codeword) != claimed || w.codeword.len() != g.n() {
        return false;
    }
    // In the row space iff appending it does not raise the rank.
    let base = crate::code::rank(g, f);
    let mut m: Vec<Vec<u8>> = g.rows().map(|r| r.to_vec()).collect();
    m.push(w.codeword.clone());
    let mut rank = 0;
    for col in 0..g.n() {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = f.inv(m[rank][col]).expect("pivot nonzero");
        for x in m[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let c = m[r][col];
                for j in 0..g.n() {
                    let s = f.mul(c, m[rank][j]);
                    m[r][j] = f.sub(m[r][j], s);
                }
            }
        }
        rank += 1;
    }
    rank == base
}

/// Status of a code record relative to the best known distances.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RecordStatus {
    /// Distance computed exactly, not yet compared.
    Exact,
    /// Only an upper bound is known, not yet compared.
    Bounded,
    /// Exact distance strictly exceeds the best known.
    Champion,
    /// Exact distance equals the best known.
    EqualChampion,
    /// Upper bound already falls below the best known.
    Below,
    /// Compared, but the data does not decide.
    Undetermined,
    /// No table entry for this `(q, n, k)`.
    Unknown,
}

impl RecordStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecordStatus::Exact => "exact",
            RecordStatus::Bounded => "bounded",
            RecordStatus::Champion => "champion",
            RecordStatus::EqualChampion => "equal-champion",
            RecordStatus::Below => "below",
            RecordStatus::Undetermined => "undetermined",
            RecordStatus::Unknown => "unknown",
        }
    }
}

/// The `[n, k, d or d_b]` data of one polygon code, with provenance.
#[derive(Clone, Debug)]
pub struct CodeRecord {
    pub polygon_id: String,
    pub q: u16,
    pub n: u32,
    pub k: u32,
    pub d_exact: Option<u32>,
    pub d_bound: Option<u32>,
    /// Support-size budget used for `d_bound`.
    pub bound_rows: Option<u32>,
    pub status: RecordStatus,
}

impl CodeRecord {
    pub fn value(&self) -> u32 {
        self.d_exact.or(self.d_bound).unwrap_or(0)
    }
}

/// Best-known minimum distances keyed by `(q, n, k)`.
#[derive(Clone, Debug, Default)]
pub struct DistanceTable {
    entries: BTreeMap<(u16, u32, u32), u32>,
}

impl DistanceTable {
    pub fn new() -> DistanceTable {
        DistanceTable::default()
    }

    pub fn insert(&mut self, q: u16, n: u32, k: u32, d: u32) {
        debug_assert!(d >= 1 && d <= n);
        self.entries.insert((q, n, k), d);
    }

    pub fn get(&self, q: u16, n: u32, k: u32) -> Option<u32> {
        self.entries.get(&(q, n, k)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Compare a record against the best-known table and set its status.
///
/// With no table entry the status becomes `Unknown` and `MissingTableEntry`
/// is returned so batch callers can keep going.
pub fn classify_record(rec: &mut CodeRecord, table: &DistanceTable) -> Result<(), Error> {
    let Some(best) = table.get(rec.q, rec.n, rec.k) else {
        rec.status = RecordStatus::Unknown;
        return Err(Error::MissingTableEntry { q: rec.q, n: rec.n, k: rec.k });
    };
    rec.status = match (rec.d_exact, rec.d_bound) {
        (Some(d), _) if d > best => RecordStatus::Champion,
        (Some(d), _) if d == best => RecordStatus::EqualChampion,
        (Some(_), _) => RecordStatus::Below,
        (None, Some(db)) if db < best => RecordStatus::Below,
        _ => RecordStatus::Undetermined,
    };
    Ok(())
}
