//! The three twisted-conjugacy solvers, conjugator linearization and
//! compression.
//!
//! All solvers look for (r, w̃) with ũ φ^-p(w̃) = w̃ φ^-r(ṽ) in F.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use crate::automorphism::{is_fixed, phi, PhiPow};
use crate::error::{domain, HydraError, Result};
use crate::free_conj::{conjugate_in_f, cyclic_length};
use crate::group::{check_conjugation, normal_form, short_subword_word, HElem};
use crate::pieces::decompose;
use crate::word::{cyclic_reduce, is_s, push_reduce, FWord, HWord, Letter, Word, S};

/// Surrogates for the existential constants of the length bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundPolicy {
    pub k_multiplier: f64,
    pub r_slack: u32,
    pub qp_multiplier: f64,
    pub hard_cap: Option<u64>,
}

impl Default for BoundPolicy {
    fn default() -> Self {
        BoundPolicy { k_multiplier: 1.0, r_slack: 2, qp_multiplier: 1.0, hard_cap: None }
    }
}

impl BoundPolicy {
    /// Parse `key=value` lines; unknown keys are errors, `#` starts a comment.
    pub fn parse(src: &str) -> Result<BoundPolicy> {
        let mut p = BoundPolicy::default();
        for (n, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HydraError::Parse { pos: n, msg: format!("expected key=value, got {line:?}") })?;
            let (k, v) = (k.trim(), v.trim());
            let bad = || HydraError::Parse { pos: n, msg: format!("bad value for {k}: {v:?}") };
            match k {
                "k_multiplier" => p.k_multiplier = v.parse().map_err(|_| bad())?,
                "qp_multiplier" => p.qp_multiplier = v.parse().map_err(|_| bad())?,
                "r_slack" => p.r_slack = v.parse().map_err(|_| bad())?,
                "hard_cap" => {
                    p.hard_cap = if v == "none" { None } else { Some(v.parse().map_err(|_| bad())?) };
                }
                _ => return Err(HydraError::Parse { pos: n, msg: format!("unknown key {k:?}") }),
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_multiplier >= 0.0 && self.qp_multiplier >= 0.0) {
            return domain("policy multipliers must be nonnegative");
        }
        Ok(())
    }

    /// Largest |r| scanned by the 0-twisted solver.
    pub fn r_max(&self, lu: usize, lv: usize) -> i64 {
        (lu + lv) as i64 + self.r_slack as i64
    }

    /// Longest intermediate word allowed in the H-twisted search.
    pub fn h_length_cap(&self, lu: usize, lv: usize, p: i64) -> usize {
        let k = (self.k_multiplier * p as f64).ceil() as usize;
        lu.max(lv) + k + self.r_slack as usize
    }

    /// Most full twisted rotations (q) along one search path: qp is capped
    /// by qp_multiplier * (lu + lv + p).
    pub fn h_swap_cap(&self, lu: usize, lv: usize, p: i64) -> u32 {
        let qp = (self.qp_multiplier * (lu + lv) as f64 + self.qp_multiplier * p as f64).floor();
        (qp / p.max(1) as f64) as u32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    UnequalSExp,
    Zero,
    IConfig,
    HConfig,
    Hnn,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::UnequalSExp => "UNEQUAL_S_EXP",
            Method::Zero => "ZERO",
            Method::IConfig => "I_CONFIG",
            Method::HConfig => "H_CONFIG",
            Method::Hnn => "HNN",
        };
        f.write_str(s)
    }
}

/// ũ = u0 u1, φ^-r(ṽ) = v0 v1 and w̃ = u0 x v0^-1, all literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub u0: FWord,
    pub u1: FWord,
    pub v0: FWord,
    pub v1: FWord,
    pub x: FWord,
}

/// A factor of a conjugator. `Swap` stands for q full twisted rotations: as
/// an F-word it is M1 = π φ^(ep)(π) ... φ^(ep(q-1))(π), as an H-word it is
/// the power s^(e p q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chunk {
    Free(FWord),
    Swap { pi: FWord, q: u64, e: i64, m1: FWord },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormTag {
    X1,
    X2,
    X3,
    X4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkForm {
    pub tag: FormTag,
    pub l: FWord,
    pub s: FWord,
    pub m1: FWord,
    pub m2: FWord,
    pub p: FWord,
    pub r: FWord,
    pub q: u64,
    pub pi: FWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedSolution {
    pub r: i64,
    pub w_tilde: FWord,
    pub method: Method,
    pub split: Option<Split>,
    /// Factorization of w̃ (in F) used by linearization; empty means one
    /// free factor.
    pub chunks: Vec<Chunk>,
    pub form: Option<ChunkForm>,
}

impl TwistedSolution {
    fn plain(r: i64, w: FWord, method: Method) -> TwistedSolution {
        TwistedSolution { r, w_tilde: w, method, split: None, chunks: Vec::new(), form: None }
    }

    /// The H-element w̃ s^r.
    pub fn conjugator(&self) -> HElem {
        HElem::new(self.w_tilde.clone(), self.r)
    }

    /// Mixed word for w̃ s^r with every swap chunk replaced by its s-power.
    pub fn linear_word(&self, p: i64) -> HWord {
        let mut v: Vec<Letter> = Vec::new();
        if self.chunks.is_empty() {
            v.extend_from_slice(self.w_tilde.letters());
        }
        for c in &self.chunks {
            match c {
                Chunk::Free(w) => v.extend_from_slice(w.letters()),
                Chunk::Swap { q, e, .. } => push_s(&mut v, e * p * *q as i64),
            }
        }
        push_s(&mut v, self.r);
        Word::reduced_from(&v)
    }
}

fn push_s(v: &mut Vec<Letter>, k: i64) {
    let l = if k < 0 { -S } else { S };
    for _ in 0..k.unsigned_abs() {
        v.push(l);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(TwistedSolution),
    Absent,
    /// The candidate cap was hit before the bounded space was exhausted.
    Inconclusive,
}

impl Outcome {
    pub fn found(&self) -> Option<&TwistedSolution> {
        match self {
            Outcome::Found(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Outcome::Inconclusive)
    }
}

/// Substitution check ũ φ^-p(w̃) = w̃ φ^-r(ṽ).
pub fn twisted_holds(u: &FWord, v: &FWord, p: i64, r: i64, w: &FWord) -> bool {
    u.mul(&phi(w, -p)) == w.mul(&phi(v, -r))
}

fn zero_r_order(r_max: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=r_max).flat_map(|k| [-k, k]))
}

/// p = 0: ũ w̃ = w̃ φ^-r(ṽ).
pub fn solve_0_twisted(u: &FWord, v: &FWord, policy: &BoundPolicy) -> Outcome {
    let (u, v) = (u.reduced(), v.reduced());
    if let Some(w) = conjugate_in_f(&u, &v) {
        return Outcome::Found(TwistedSolution::plain(0, w, Method::Zero));
    }
    let (uc, _) = cyclic_reduce(&u);
    let (vc, _) = cyclic_reduce(&v);
    if is_fixed(&vc) {
        return Outcome::Absent;
    }
    let r_max = policy.r_max(uc.len(), vc.len());
    let mut scanned = 0u64;
    for r in zero_r_order(r_max) {
        if r == 0 {
            continue;
        }
        scanned += 1;
        if policy.hard_cap.is_some_and(|c| scanned > c) {
            return Outcome::Inconclusive;
        }
        if cyclic_length(&phi(&vc, -r)) != uc.len() {
            continue;
        }
        let vr = phi(&v, -r);
        if let Some(w) = conjugate_in_f(&u, &vr) {
            return Outcome::Found(TwistedSolution::plain(r, w, Method::Zero));
        }
    }
    Outcome::Absent
}

fn prefix_images(w: &FWord, psi: &PhiPow) -> Vec<FWord> {
    let mut out = vec![Word::empty()];
    let mut cur: Vec<Letter> = Vec::new();
    for &l in w.letters() {
        push_reduce(&mut cur, psi.image_of(l));
        out.push(Word::new(cur.clone()));
    }
    out
}

fn rank_of(words: &[&FWord]) -> u32 {
    words.iter().map(|w| w.max_index()).max().unwrap_or(0).max(1)
}

/// Exhaustive search over w̃ = U V, U a prefix of ũ and V^-1 a prefix of
/// φ^-r(ṽ), r in [0, p).
pub fn solve_i_twisted(u: &FWord, v: &FWord, p: i64) -> Result<Option<TwistedSolution>> {
    if p <= 0 {
        return domain("solve_i_twisted needs p > 0");
    }
    let (u, v) = (u.reduced(), v.reduced());
    let m = rank_of(&[&u, &v]);
    let psi = PhiPow::new(m, -p);
    let pu = prefix_images(&u, &psi);
    for r in 0..p {
        let vr = phi(&v, -r);
        // ψ(V) for V = (prefix of vr)^-1
        let pv: Vec<FWord> = prefix_images(&vr, &psi).into_iter().map(|x| x.inverse()).collect();
        for i in 0..=u.len() {
            let big_u = u.prefix(i);
            let lhs_u = u.mul(&pu[i]);
            for j in 0..=vr.len() {
                let big_v = vr.prefix(j).inverse();
                let w = big_u.mul(&big_v);
                if lhs_u.mul(&pv[j]) == w.mul(&vr) {
                    let split = Split {
                        u0: big_u.clone(),
                        u1: u.suffix(u.len() - i),
                        v0: vr.prefix(j),
                        v1: vr.suffix(vr.len() - j),
                        x: Word::empty(),
                    };
                    let mut sol = TwistedSolution::plain(r, w, Method::IConfig);
                    sol.split = Some(split);
                    return Ok(Some(sol));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Start,
    Letter(Letter),
    Rot(usize),
    InvRot(usize),
}

struct Node {
    t: FWord,
    parent: usize,
    step: Step,
    swaps: u32,
}

struct Side {
    nodes: Vec<Node>,
    index: HashMap<FWord, usize>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
}

impl Side {
    fn new(t: FWord) -> Side {
        let mut s = Side { nodes: Vec::new(), index: HashMap::new(), heap: BinaryHeap::new() };
        s.insert(t, usize::MAX, Step::Start, 0);
        s
    }

    fn insert(&mut self, t: FWord, parent: usize, step: Step, swaps: u32) -> Option<usize> {
        if self.index.contains_key(&t) {
            return None;
        }
        let id = self.nodes.len();
        self.heap.push(Reverse((t.len(), id)));
        self.index.insert(t.clone(), id);
        self.nodes.push(Node { t, parent, step, swaps });
        Some(id)
    }

    /// Chunks of the conjugator Y with Y^-1 T0 ψ(Y) = T(id), in order.
    fn path(&self, id: usize, ctx: &Ctx) -> Vec<Chunk> {
        let mut steps = Vec::new();
        let mut cur = id;
        while self.nodes[cur].step != Step::Start {
            let parent = self.nodes[cur].parent;
            steps.push((self.nodes[parent].t.clone(), self.nodes[cur].step));
            cur = parent;
        }
        steps.reverse();
        let mut out: Vec<Chunk> = Vec::new();
        for (t, step) in steps {
            let c = ctx.step_chunk(&t, step);
            match (out.last_mut(), c) {
                (Some(Chunk::Free(a)), Chunk::Free(b)) => *a = a.mul(&b),
                (Some(Chunk::Swap { q, e, m1, .. }), Chunk::Swap { q: q2, e: e2, m1: b, .. }) if *e == e2 => {
                    *q += q2;
                    *m1 = m1.mul(&b);
                }
                (_, c) => out.push(c),
            }
        }
        out
    }
}

struct Ctx {
    m: u32,
    p: i64,
    psi: PhiPow,
    psi_inv: PhiPow,
}

impl Ctx {
    fn step_chunk(&self, t: &FWord, step: Step) -> Chunk {
        let n = t.len();
        match step {
            Step::Start => Chunk::Free(Word::empty()),
            Step::Letter(x) => Chunk::Free(Word::letter(x)),
            Step::Rot(k) if k == n && n > 0 => Chunk::Swap { pi: t.clone(), q: 1, e: -1, m1: t.clone() },
            Step::Rot(k) => Chunk::Free(t.prefix(k)),
            Step::InvRot(k) => {
                let y = self.psi_inv.apply(&t.letters()[n - k..]).inverse();
                if k == n && n > 0 {
                    Chunk::Swap { pi: y.clone(), q: 1, e: 1, m1: y }
                } else {
                    Chunk::Free(y)
                }
            }
        }
    }

    /// `full` allows the full-length rotations that count as swaps.
    fn neighbours(&self, t: &FWord, cap: usize, full: bool, out: &mut Vec<(FWord, Step)>) {
        let v = t.letters();
        let n = v.len();
        let kmax = if full { n } else { n.saturating_sub(1) };
        // T = A B -> B ψ(A)
        let mut img: Vec<Letter> = Vec::new();
        for k in 1..=n {
            push_reduce(&mut img, self.psi.image_of(v[k - 1]));
            if k > kmax {
                break;
            }
            let mut w = v[k..].to_vec();
            push_reduce(&mut w, &img);
            if w.len() <= cap {
                out.push((Word::new(w), Step::Rot(k)));
            }
        }
        // T = A B -> ψ^-1(B) A
        let mut inv: Vec<Letter> = Vec::new();
        for k in 1..=n {
            let mut x = self.psi_inv.image_of(v[n - k]).to_vec();
            push_reduce(&mut x, &inv);
            inv = x;
            if k > kmax {
                break;
            }
            let mut w = inv.clone();
            push_reduce(&mut w, &v[..n - k]);
            if w.len() <= cap {
                out.push((Word::new(w), Step::InvRot(k)));
            }
        }
        for i in 1..=self.m as Letter {
            for x in [i, -i] {
                let mut w = vec![-x];
                push_reduce(&mut w, v);
                push_reduce(&mut w, self.psi.image_of(x));
                if w.len() <= cap {
                    out.push((Word::new(w), Step::Letter(x)));
                }
            }
        }
    }
}

fn chunks_word(chunks: &[Chunk]) -> FWord {
    let mut v = Vec::new();
    for c in chunks {
        match c {
            Chunk::Free(w) => push_reduce(&mut v, w.letters()),
            Chunk::Swap { m1, .. } => push_reduce(&mut v, m1.letters()),
        }
    }
    Word::new(v)
}

fn invert_chunks(chunks: Vec<Chunk>, p: i64) -> Vec<Chunk> {
    chunks
        .into_iter()
        .rev()
        .map(|c| match c {
            Chunk::Free(w) => Chunk::Free(w.inverse()),
            // M1^-1 = π' φ^(-ep)(π') ... with π' = φ^(ep(q-1))(π)^-1
            Chunk::Swap { pi, q, e, m1 } => {
                Chunk::Swap { pi: phi(&pi, e * p * (q as i64 - 1)).inverse(), q, e: -e, m1: m1.inverse() }
            }
        })
        .collect()
}

/// Split w̃ = u0 x v0^-1 with u0 the longest common prefix with ũ and v0 the
/// longest prefix of vr whose inverse ends the remainder.
pub fn h_split(u: &FWord, vr: &FWord, w: &FWord) -> Split {
    let a = w.lcp_len(u);
    let rest = w.suffix(w.len() - a);
    let rinv = rest.inverse();
    let b = rinv.lcp_len(vr);
    Split {
        u0: u.prefix(a),
        u1: u.suffix(u.len() - a),
        v0: vr.prefix(b),
        v1: vr.suffix(vr.len() - b),
        x: rest.prefix(rest.len() - b),
    }
}

fn classify(split: &Split, chunks: &[Chunk], p: i64) -> ChunkForm {
    let mut form = ChunkForm {
        tag: FormTag::X1,
        l: Word::empty(),
        s: Word::empty(),
        m1: Word::empty(),
        m2: Word::empty(),
        p: Word::empty(),
        r: Word::empty(),
        q: 0,
        pi: Word::empty(),
    };
    if let Some(pos) = chunks.iter().position(|c| matches!(c, Chunk::Swap { .. })) {
        if let Chunk::Swap { q, m1, pi, .. } = &chunks[pos] {
            form.tag = FormTag::X3;
            form.l = chunks_word(&chunks[..pos]);
            form.m1 = m1.clone();
            form.q = *q;
            form.pi = pi.clone();
            form.r = chunks_word(&chunks[pos + 1..]);
        }
        return form;
    }
    let x = &split.x;
    if split.x.max_index() <= 1 {
        form.tag = FormTag::X1;
    } else if phi(&split.u0, -p).contains(x) || phi(&split.v0.inverse(), -p).contains(x) {
        form.tag = FormTag::X2;
        form.l = x.clone();
    } else {
        form.tag = FormTag::X4;
        form.l = x.clone();
    }
    form
}

/// Bidirectional search over states T with moves T -> Y^-1 T ψ(Y): twisted
/// rotations, inverse rotations and single letters, restricted to words no
/// longer than the policy's length cap. Exhausting one side's component
/// within the cap certifies absence relative to the policy.
/// `m` is the rank of the ambient group; conjugators may use generators
/// beyond the ranks of ũ and ṽ.
pub fn solve_h_twisted(u: &FWord, v: &FWord, p: i64, m: u32, policy: &BoundPolicy) -> Result<Outcome> {
    if p <= 0 {
        return domain("solve_h_twisted needs p > 0");
    }
    let (u, v) = (u.reduced(), v.reduced());
    let m = m.max(rank_of(&[&u, &v]));
    let ctx = Ctx { m, p, psi: PhiPow::new(m, -p), psi_inv: PhiPow::new(m, p) };
    let mut budget = policy.hard_cap;
    let mut inconclusive = false;
    for r in 0..p {
        let vr = phi(&v, -r);
        match search(&ctx, &u, &vr, r, policy, &mut budget) {
            Outcome::Found(s) => return Ok(Outcome::Found(s)),
            Outcome::Inconclusive => inconclusive = true,
            Outcome::Absent => {}
        }
    }
    Ok(if inconclusive { Outcome::Inconclusive } else { Outcome::Absent })
}

/// Greedy: from the start node, keep taking the shortest strictly shorter
/// neighbour.
fn descend(ctx: &Ctx, side: &mut Side, cap: usize, max_swaps: u32, buf: &mut Vec<(FWord, Step)>) {
    let mut id = 0;
    loop {
        let t = side.nodes[id].t.clone();
        let swaps = side.nodes[id].swaps;
        buf.clear();
        ctx.neighbours(&t, cap, swaps < max_swaps, buf);
        let n = t.len();
        let Some((nt, step)) = buf.drain(..).filter(|(w, _)| w.len() < n).min_by_key(|(w, _)| w.len()) else {
            return;
        };
        let full = matches!(step, Step::Rot(k) | Step::InvRot(k) if k == n);
        match side.insert(nt, id, step, swaps + full as u32) {
            Some(nid) => id = nid,
            None => return,
        }
    }
}

fn meet(ctx: &Ctx, sides: &[Side; 2], u: &FWord, vr: &FWord, r: i64, a: usize, b: usize) -> Option<TwistedSolution> {
    let mut chunks = sides[0].path(a, ctx);
    chunks.extend(invert_chunks(sides[1].path(b, ctx), ctx.p));
    let w = chunks_word(&chunks);
    let split = h_split(u, vr, &w);
    if split.x.is_empty() || !twisted_holds(u, vr, ctx.p, 0, &w) {
        return None;
    }
    let form = classify(&split, &chunks, ctx.p);
    Some(TwistedSolution { r, w_tilde: w, method: Method::HConfig, split: Some(split), chunks, form: Some(form) })
}

/// Both sides first descend greedily; the caps are computed from the
/// shortest states reached.
fn search(ctx: &Ctx, u: &FWord, vr: &FWord, r: i64, policy: &BoundPolicy, budget: &mut Option<u64>) -> Outcome {
    let mut sides = [Side::new(u.clone()), Side::new(vr.clone())];
    let mut buf = Vec::new();
    let swaps0 = policy.h_swap_cap(u.len(), vr.len(), ctx.p);
    for side in sides.iter_mut() {
        descend(ctx, side, usize::MAX, swaps0, &mut buf);
    }
    let low = |s: &Side| s.nodes.iter().map(|n| n.t.len()).min().unwrap_or(0);
    let (lu, lv) = (low(&sides[0]), low(&sides[1]));
    let cap = policy.h_length_cap(lu, lv, ctx.p);
    let max_swaps = policy.h_swap_cap(lu, lv, ctx.p);
    if let Some(sol) = sides[1].nodes.iter().enumerate().find_map(|(b, n)| {
        let &a = sides[0].index.get(&n.t)?;
        meet(ctx, &sides, u, vr, r, a, b)
    }) {
        return Outcome::Found(sol);
    }
    loop {
        // expand the side with the smaller frontier
        let pick = match (sides[0].heap.is_empty(), sides[1].heap.is_empty()) {
            (true, _) | (_, true) => return Outcome::Absent,
            _ if sides[0].nodes.len() <= sides[1].nodes.len() => 0,
            _ => 1,
        };
        let Reverse((_, id)) = sides[pick].heap.pop().expect("nonempty");
        if let Some(b) = budget.as_mut() {
            if *b == 0 {
                return Outcome::Inconclusive;
            }
            *b -= 1;
        }
        let t = sides[pick].nodes[id].t.clone();
        let swaps = sides[pick].nodes[id].swaps;
        buf.clear();
        ctx.neighbours(&t, cap, swaps < max_swaps, &mut buf);
        let n = t.len();
        for (nt, step) in buf.drain(..) {
            let full = matches!(step, Step::Rot(k) | Step::InvRot(k) if k == n && n > 0);
            let Some(nid) = sides[pick].insert(nt.clone(), id, step, swaps + full as u32) else { continue };
            if let Some(&oid) = sides[1 - pick].index.get(&nt) {
                let (a, b) = if pick == 0 { (nid, oid) } else { (oid, nid) };
                if let Some(sol) = meet(ctx, &sides, u, vr, r, a, b) {
                    return Outcome::Found(sol);
                }
            }
        }
    }
}

/// The conjugator u0 L S s^(pq) M2 P R v0^-1 s^r of an X3 solution: every
/// M1 chunk becomes an s-power. Checked against u and v.
pub fn linearize_conjugator(sol: &TwistedSolution, u: &HElem, v: &HElem) -> Result<HElem> {
    let w = sol.linear_word(u.s_exp);
    let g = normal_form(&w);
    if !check_conjugation(u, &g, v) {
        return Err(HydraError::Internal(format!("linearized conjugator {w} fails")));
    }
    Ok(g)
}

/// Greedy compression of a conjugator: segments of a-runs equal to φ^k(y)
/// become s^-k y s^k when shorter; the normal form and the shuffled
/// subword form are used when shorter. Iterated to a fixed point.
pub fn compress_conjugator(w: &HWord, u: &HElem, v: &HElem) -> Result<HWord> {
    if !check_conjugation(u, &normal_form(w), v) {
        return domain("compress_conjugator: word does not conjugate u to v");
    }
    let target = normal_form(w);
    let mut cur = w.reduced();
    loop {
        let mut best = compress_runs(&cur);
        for cand in [target.to_word(), shuffled_form(&cur)] {
            if cand.len() < best.len() {
                best = cand;
            }
        }
        if best.len() >= cur.len() {
            break;
        }
        debug_assert_eq!(normal_form(&best), target);
        cur = best;
    }
    Ok(cur)
}

fn shuffled_form(w: &HWord) -> HWord {
    let h = normal_form(w);
    match short_subword_word(w, &h.u_tilde) {
        Ok(x) => {
            let mut v = x.into_letters();
            push_s(&mut v, h.s_exp);
            Word::reduced_from(&v)
        }
        Err(_) => w.clone(),
    }
}

const MAX_SHIFT: i64 = 16;

fn compress_runs(w: &HWord) -> HWord {
    let mut out: Vec<Letter> = Vec::new();
    let v = w.letters();
    let mut i = 0;
    while i < v.len() {
        if is_s(v[i]) {
            push_reduce(&mut out, &v[i..i + 1]);
            i += 1;
            continue;
        }
        let mut j = i;
        while j < v.len() && !is_s(v[j]) {
            j += 1;
        }
        let run = Word::reduced_from(&v[i..j]);
        push_reduce(&mut out, &compress_run(&run));
        i = j;
    }
    Word::new(out)
}

/// Minimum-length rewriting of an a-word as literal letters and blocks
/// s^-k y s^k with y = φ^-k(segment).
fn compress_run(run: &FWord) -> Vec<Letter> {
    let n = run.len();
    if n < 4 {
        return run.letters().to_vec();
    }
    let rank = run.max_index();
    let d = decompose(run, rank).expect("rank is the max index");
    let mut starts: Vec<usize> = d.pieces.iter().map(|p| p.start).collect();
    starts.dedup();
    let is_start = {
        let mut b = vec![false; n + 1];
        for &s in &starts {
            b[s] = true;
        }
        b
    };
    let m = rank.max(1);
    let kmax = MAX_SHIFT.min(n as i64 / 2);
    let tabs: Vec<(i64, PhiPow)> = (1..=kmax).flat_map(|k| [k, -k]).map(|k| (k, PhiPow::new(m, -k))).collect();
    // best[j] = (cost, back pointer, block)
    let mut best: Vec<(usize, usize, Option<(i64, Vec<Letter>)>)> = vec![(usize::MAX, 0, None); n + 1];
    best[0] = (0, 0, None);
    let letters = run.letters();
    for a in 0..n {
        if best[a].0 == usize::MAX {
            continue;
        }
        let base = best[a].0;
        if base + 1 < best[a + 1].0 {
            best[a + 1] = (base + 1, a, None);
        }
        if !is_start[a] {
            continue;
        }
        for (k, tab) in &tabs {
            let mut y: Vec<Letter> = Vec::new();
            for b in a + 1..=n {
                push_reduce(&mut y, tab.image_of(letters[b - 1]));
                let cost = y.len() + 2 * k.unsigned_abs() as usize;
                if y.len() > n {
                    break;
                }
                if base + cost < best[b].0 {
                    best[b] = (base + cost, a, Some((*k, y.clone())));
                }
            }
        }
    }
    let mut parts = Vec::new();
    let mut b = n;
    while b > 0 {
        let (_, a, blk) = &best[b];
        parts.push((*a, b, blk.clone()));
        b = *a;
    }
    parts.reverse();
    let mut out = Vec::new();
    for (a, b, blk) in parts {
        match blk {
            None => out.extend_from_slice(&letters[a..b]),
            Some((k, y)) => {
                push_s(&mut out, -k);
                out.extend(y);
                push_s(&mut out, k);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn zero_twisted_examples() {
        let pol = BoundPolicy::default();
        let s = solve_0_twisted(&w("a2 a1"), &w("a2"), &pol);
        let s = s.found().unwrap();
        assert_eq!((s.r, s.w_tilde.clone()), (-1, Word::empty()));
        let x = w("a3 A1 a2");
        let s = solve_0_twisted(&x, &x, &pol);
        assert_eq!(s.found().map(|s| (s.r, s.w_tilde.clone())), Some((0, Word::empty())));
        assert_eq!(solve_0_twisted(&w("a2"), &w("a3"), &pol), Outcome::Absent);
    }

    #[test]
    fn i_twisted_examples() {
        let s = solve_i_twisted(&w("a1"), &w("a1"), 1).unwrap().unwrap();
        assert_eq!((s.r, s.w_tilde), (0, Word::empty()));
        let s = solve_i_twisted(&w("a3 a2 A1 A3"), &Word::empty(), 1).unwrap().unwrap();
        assert_eq!((s.r, s.w_tilde), (0, w("a3")));
        assert_eq!(solve_i_twisted(&w("a2"), &w("a3"), 1).unwrap(), None);
        assert!(solve_i_twisted(&w("a2"), &w("a3"), 0).is_err());
    }

    #[test]
    fn h_twisted_examples() {
        let pol = BoundPolicy::default();
        assert_eq!(solve_h_twisted(&Word::empty(), &Word::empty(), 1, 2, &pol).unwrap(), Outcome::Absent);
        assert!(solve_h_twisted(&w("a1"), &w("a1"), 0, 2, &pol).is_err());
    }

    #[test]
    fn compress_examples() {
        let x = phi(&w("a3"), 5);
        assert_eq!(x.len(), 16);
        let u = HElem::identity();
        let c = compress_conjugator(&x, &u, &u).unwrap();
        // s^-5 a3 s^5 has length 11; s^-3 φ^2(a3) s^3 has length 10
        assert!(c.len() <= 11);
        assert_eq!(c, w("S^3 a3 a2 a2 a1 s^3"));
        assert_eq!(normal_form(&c), normal_form(&x));
        assert_eq!(compress_conjugator(&c, &u, &u).unwrap(), c);
        let one = w("a2");
        assert_eq!(compress_conjugator(&one, &u, &u).unwrap(), one);
    }

    #[test]
    fn policy_file() {
        let p = BoundPolicy::parse("k_multiplier = 2\n# note\nr_slack=3\nhard_cap=100").unwrap();
        assert_eq!(p, BoundPolicy { k_multiplier: 2.0, r_slack: 3, qp_multiplier: 1.0, hard_cap: Some(100) });
        assert!(BoundPolicy::parse("bogus=1").is_err());
    }
}
