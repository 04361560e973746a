//! Rank, rank-i piece decompositions, and preserved-prefix shapes.

use std::fmt;

use crate::automorphism::phi;
use crate::error::{domain, Result};
use crate::word::{FWord, Letter, Word};

pub fn rank(w: &FWord) -> u32 {
    w.max_index()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceType {
    /// a_i u
    Head,
    /// u a_i^-1
    Tail,
    /// a_i u a_i^-1
    Wrap,
    /// u
    Plain,
}

impl PieceType {
    pub fn is_strict(self) -> bool {
        self != PieceType::Plain
    }
}

impl fmt::Display for PieceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PieceType::Head => "HEAD",
            PieceType::Tail => "TAIL",
            PieceType::Wrap => "WRAP",
            PieceType::Plain => "PLAIN",
        };
        f.write_str(s)
    }
}

/// A piece as offsets into the parent word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: usize,
    pub end: usize,
    pub rank: u32,
    pub ptype: PieceType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceDecomposition {
    pub rank: u32,
    pub word: FWord,
    pub pieces: Vec<Piece>,
}

impl PieceDecomposition {
    pub fn count(&self) -> usize {
        self.pieces.len()
    }

    pub fn piece_letters(&self, k: usize) -> &[Letter] {
        let p = &self.pieces[k];
        &self.word.letters()[p.start..p.end]
    }

    pub fn piece_word(&self, k: usize) -> FWord {
        Word::new(self.piece_letters(k).to_vec())
    }

    pub fn piece_words(&self) -> Vec<FWord> {
        (0..self.count()).map(|k| self.piece_word(k)).collect()
    }

    pub fn types(&self) -> Vec<PieceType> {
        self.pieces.iter().map(|p| p.ptype).collect()
    }

    /// phi^r applied piece by piece.
    pub fn piecewise_image(&self, r: i64) -> Vec<FWord> {
        self.piece_words().iter().map(|p| phi(p, r)).collect()
    }
}

/// Type of a single word viewed as a rank-i piece, if it is one.
pub fn piece_type(w: &[Letter], i: u32) -> Option<PieceType> {
    let ai = i as Letter;
    if w.is_empty() {
        return None;
    }
    let interior_ok = |s: &[Letter]| s.iter().all(|&l| l.unsigned_abs() < i);
    let n = w.len();
    let starts = w[0] == ai;
    let ends = w[n - 1] == -ai;
    match (starts, ends) {
        (true, true) if n >= 2 && interior_ok(&w[1..n - 1]) => Some(PieceType::Wrap),
        (true, _) if interior_ok(&w[1..]) => Some(PieceType::Head),
        (_, true) if interior_ok(&w[..n - 1]) => Some(PieceType::Tail),
        _ if interior_ok(w) => Some(PieceType::Plain),
        _ => None,
    }
}

/// Greedy rank-i decomposition: a piece opens at each a_i and closes at each
/// a_i^-1.
/// The scan works on the letters as given; reduced input is the normal case.
pub fn decompose(w: &FWord, i: u32) -> Result<PieceDecomposition> {
    let w = w.clone();
    if rank(&w) > i {
        return domain(format!("decompose: word has rank {} > {}", rank(&w), i));
    }
    let ai = i as Letter;
    let v = w.letters();
    let mut pieces = Vec::new();
    let mut start: Option<usize> = None;
    let mut headed = false;
    let close = |pieces: &mut Vec<Piece>, s: usize, e: usize, headed: bool, tailed: bool| {
        let ptype = match (headed, tailed) {
            (true, true) => PieceType::Wrap,
            (true, false) => PieceType::Head,
            (false, true) => PieceType::Tail,
            (false, false) => PieceType::Plain,
        };
        pieces.push(Piece { start: s, end: e, rank: i, ptype });
    };
    for (k, &l) in v.iter().enumerate() {
        if l == ai {
            if let Some(s) = start {
                close(&mut pieces, s, k, headed, false);
            }
            start = Some(k);
            headed = true;
        } else if l == -ai {
            let s = start.unwrap_or(k);
            close(&mut pieces, s, k + 1, headed, true);
            start = None;
            headed = false;
        } else if start.is_none() {
            start = Some(k);
            headed = false;
        }
    }
    if let Some(s) = start {
        close(&mut pieces, s, v.len(), headed, false);
    }
    Ok(PieceDecomposition { rank: i, word: w, pieces })
}

/// Longest common prefix P of w0 and phi^r(w0), written P = P1 P3 ... Pi with
/// P1 a prefix of phi^k(a_t) and Pj a subword of phi^r(a_j^-1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixShape {
    pub rank: u32,
    pub t: u32,
    pub k: i64,
    pub p1: FWord,
    /// Entries for j = 3..=rank.
    pub pj: Vec<FWord>,
}

impl PrefixShape {
    pub fn concat(&self) -> FWord {
        let mut v = self.p1.letters().to_vec();
        for p in &self.pj {
            v.extend_from_slice(p.letters());
        }
        Word::new(v)
    }
}

/// Reduced form of w^-1 phi^r(w) split as (alpha, beta) with alpha a prefix of
/// w^-1 and beta a suffix of phi^r(w).
pub fn twisted_quotient_split(w: &FWord, r: i64) -> (FWord, FWord) {
    let img = phi(w, r);
    let c = w.lcp_len(&img);
    (w.inverse().prefix(w.len() - c), img.suffix(img.len() - c))
}

fn first_unfixed_piece(d: &PieceDecomposition, r: i64) -> Option<usize> {
    (0..d.count()).find(|&k| {
        let p = d.piece_word(k);
        phi(&p, r) != p
    })
}

/// The replacement word w0 of the preserved-prefix construction, following
/// the induction on piece types. `None` only if w is fixed (then w0 = ε).
fn replacement(w: &FWord, r: i64) -> FWord {
    let w = w.reduced();
    if r == 0 || phi(&w, r) == w {
        return Word::empty();
    }
    if r < 0 {
        let bar = phi(&w, r);
        let bar0 = replacement(&bar, -r);
        return phi(&bar0, -r);
    }
    let i = rank(&w);
    let d = decompose(&w, i).expect("rank checked");
    let k = match first_unfixed_piece(&d, r) {
        Some(k) => k,
        None => return Word::empty(),
    };
    let pi = d.piece_word(k);
    let pi0 = piece_replacement(&pi, d.pieces[k].ptype, r, i);
    let mut v = pi0.into_letters();
    v.extend_from_slice(&w.letters()[d.pieces[k].end..]);
    Word::reduced_from(&v)
}

fn piece_replacement(pi: &FWord, ptype: PieceType, r: i64, i: u32) -> FWord {
    let ai = i as Letter;
    if i == 2 {
        return match ptype {
            PieceType::Head => Word::letter(ai),
            PieceType::Tail => Word::letter(-ai),
            _ => pi.clone(),
        };
    }
    match ptype {
        PieceType::Plain => replacement(pi, r),
        PieceType::Head | PieceType::Wrap => pi.clone(),
        PieceType::Tail => {
            let u = pi.prefix(pi.len() - 1);
            let u0 = replacement(&u, r);
            u0.mul(&Word::letter(-ai))
        }
    }
}

fn k_order(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [-k, k]))
}

fn split_tail(rest: &[Letter], j: u32, i: u32, pools: &[Vec<Letter>], out: &mut Vec<FWord>) -> bool {
    if j > i {
        return rest.is_empty();
    }
    let pool = &pools[(j - 3) as usize];
    for len in (0..=rest.len()).rev() {
        let piece = &rest[..len];
        if crate::word::find_slice(pool, piece).is_some() {
            out.push(Word::new(piece.to_vec()));
            if split_tail(&rest[len..], j + 1, i, pools, out) {
                return true;
            }
            out.pop();
        }
    }
    false
}

/// Express a word as P1 P3 ... Pi (rank i) with |k| <= k_bound.
pub fn match_prefix_shape(p: &FWord, r: i64, i: u32, k_bound: i64) -> Option<PrefixShape> {
    let i = i.max(1);
    let pools: Vec<Vec<Letter>> = (3..=i).map(|j| phi(&Word::letter(-(j as Letter)), r).into_letters()).collect();
    for k in k_order(k_bound.max(0)) {
        for t in 1..=i {
            let img = phi(&Word::letter(t as Letter), k);
            let l1max = p.lcp_len(&img);
            for l1 in (0..=l1max).rev() {
                let mut parts = Vec::new();
                if split_tail(&p.letters()[l1..], 3, i, &pools, &mut parts) {
                    return Some(PrefixShape { rank: i, t, k, p1: p.prefix(l1), pj: parts });
                }
            }
        }
    }
    None
}

/// Replacement word w0 with the same reduced w^-1 phi^r(w) (and the same
/// split), together with the shape of the common prefix of w0 and phi^r(w0).
pub fn shared_prefix_shape(w: &FWord, r: i64, k_bound: i64) -> Result<Option<(FWord, PrefixShape)>> {
    if r == 0 {
        return domain("shared_prefix_shape needs r != 0");
    }
    let w = w.reduced();
    let w0 = replacement(&w, r);
    if twisted_quotient_split(&w, r) != twisted_quotient_split(&w0, r) {
        return Ok(None);
    }
    let img = phi(&w0, r);
    let p = w0.prefix(w0.lcp_len(&img));
    let i = rank(&w).max(1);
    Ok(match_prefix_shape(&p, r, i, k_bound).map(|s| (w0, s)))
}
