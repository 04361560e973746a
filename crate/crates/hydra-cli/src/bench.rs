use std::io::Write;
use std::time::Instant;

use anyhow::Result;
use hydra::automorphism::letter_image_length;
use hydra::{decide_conjugacy, phi, BoundPolicy, Letter, Word, S};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub i: u32,
    pub r: i64,
    pub exact_length: u64,
    pub binomial_length: u64,
    pub diff: i64,
    /// exact_length / |r|^(i-1); empty for r = 0.
    pub ratio: Option<f64>,
}

/// g = φ^k(a_i^k), equal in H to s^-k a_i^k s^k.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionRow {
    pub i: u32,
    pub k: u32,
    pub a_length: usize,
    pub h_length: usize,
}

#[derive(Clone, Debug, Default)]
pub struct GrowthData {
    pub growth: Vec<GrowthRow>,
    pub distortion: Vec<DistortionRow>,
}

/// Exact |φ^r(a_i)| against the binomial sums for i in `i_set`, |r| <= r_max.
pub fn run_growth(m: u32, i_set: &[u32], r_max: i64) -> Result<GrowthData> {
    let mut data = GrowthData::default();
    for &i in i_set {
        anyhow::ensure!((1..=m).contains(&i), "generator a{i} outside rank {m}");
        for r in -r_max..=r_max {
            let exact = phi(&Word::letter(i as Letter), r).len() as u64;
            let binomial = letter_image_length(i, r)?;
            let ratio = (r != 0).then(|| exact as f64 / (r.unsigned_abs() as f64).powi(i as i32 - 1));
            data.growth.push(GrowthRow {
                i,
                r,
                exact_length: exact,
                binomial_length: binomial,
                diff: exact as i64 - binomial as i64,
                ratio,
            });
        }
        for k in 1..=r_max.clamp(0, 12) as u32 {
            let g = phi(&Word::new(vec![i as Letter; k as usize]), k as i64);
            data.distortion.push(DistortionRow { i, k, a_length: g.len(), h_length: 3 * k as usize });
        }
    }
    Ok(data)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClRow {
    pub n: usize,
    pub sample: usize,
    pub input_len: usize,
    pub witness_len: usize,
    pub raw_len: usize,
    pub method: String,
    pub verified: bool,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ClData {
    pub rows: Vec<ClRow>,
    /// Least-squares slope of witness_len against n.
    pub witness_slope: f64,
    /// Slope of log(median runtime) against log n.
    pub runtime_slope: f64,
}

impl ClData {
    /// max(witness_len / n) over the rows with this n.
    pub fn max_ratio(&self, n: usize) -> f64 {
        self.rows.iter().filter(|r| r.n == n).map(|r| r.witness_len as f64 / n as f64).fold(0.0, f64::max)
    }

    pub fn median_runtime(&self, n: usize) -> f64 {
        median(self.rows.iter().filter(|r| r.n == n).map(|r| r.runtime_ms).collect())
    }
}

/// Freely reduced random word over a1..am and s.
pub fn random_word(rng: &mut ChaCha8Rng, m: u32, len: usize) -> Word {
    let mut v: Vec<Letter> = Vec::with_capacity(len);
    while v.len() < len {
        let k = rng.gen_range(0..=m) as Letter;
        let l = if k == 0 { S } else { k };
        let l = if rng.gen_bool(0.5) { l } else { -l };
        if v.last() != Some(&-l) {
            v.push(l);
        }
    }
    Word::new(v)
}

/// (u, w^-1 u w) with ℓ(u) + ℓ(v) close to n: ℓ(u) = n/3, ℓ(w) = n/6.
pub fn sample_pair(rng: &mut ChaCha8Rng, m: u32, n: usize) -> (Word, Word) {
    let u = random_word(rng, m, n.div_ceil(3));
    let w = random_word(rng, m, n.div_ceil(6));
    let v = w.inverse().mul(&u).mul(&w);
    (u, v)
}

fn rng_for(seed: u64, n: usize, k: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((n as u64) << 32) | k as u64);
    r
}

/// Conjugate pairs of size about n, decided by the engine. Rows are sorted
/// by (n, sample).
pub fn run_cl_experiment(m: u32, n_set: &[usize], samples: usize, seed: u64) -> Result<ClData> {
    let policy = BoundPolicy::default();
    let jobs: Vec<(usize, usize)> = n_set.iter().flat_map(|&n| (0..samples).map(move |k| (n, k))).collect();
    let mut rows = jobs
        .par_iter()
        .map(|&(n, k)| -> Result<ClRow> {
            let (u, v) = sample_pair(&mut rng_for(seed, n, k), m, n);
            let t = Instant::now();
            let cert = decide_conjugacy(&u, &v, m, &policy)?;
            let runtime_ms = t.elapsed().as_secs_f64() * 1e3;
            anyhow::ensure!(cert.conjugate && cert.verified, "pair {u} / {v} not certified");
            Ok(ClRow {
                n,
                sample: k,
                input_len: u.len() + v.len(),
                witness_len: cert.witness.as_ref().map_or(0, |x| x.len()),
                raw_len: cert.raw_witness.as_ref().map_or(0, |x| x.len()),
                method: cert.method.to_string(),
                verified: cert.verified,
                runtime_ms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.n, r.sample));
    let mut data = ClData { rows, ..ClData::default() };
    let pts: Vec<(f64, f64)> = data.rows.iter().map(|r| (r.n as f64, r.witness_len as f64)).collect();
    data.witness_slope = slope(&pts);
    data.runtime_slope = loglog_slope(&data, n_set);
    Ok(data)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RtRow {
    pub n: usize,
    pub samples: usize,
    pub median_ms: f64,
    pub max_ms: f64,
}

/// Median runtime of the engine per n and the log-log slope across n.
pub fn run_rt_experiment(m: u32, n_set: &[usize], samples: usize, seed: u64) -> Result<(Vec<RtRow>, f64)> {
    let data = run_cl_experiment(m, n_set, samples, seed)?;
    let rows = n_set
        .iter()
        .map(|&n| RtRow {
            n,
            samples,
            median_ms: data.median_runtime(n),
            max_ms: data.rows.iter().filter(|r| r.n == n).map(|r| r.runtime_ms).fold(0.0, f64::max),
        })
        .collect();
    Ok((rows, data.runtime_slope))
}

fn loglog_slope(data: &ClData, n_set: &[usize]) -> f64 {
    let pts: Vec<(f64, f64)> =
        n_set.iter().map(|&n| ((n as f64).ln(), data.median_runtime(n).max(1e-6).ln())).collect();
    slope(&pts)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        (v[k - 1] + v[k]) / 2.0
    }
}

/// Least-squares slope.
pub fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn write_csv<T: Serialize>(out: impl Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Rows, then a `# summary` comment line with both slopes to 2 decimals.
pub fn write_cl_csv(mut out: impl Write, data: &ClData) -> Result<()> {
    write_csv(&mut out, &data.rows)?;
    writeln!(out, "# summary,witness_slope={:.2},runtime_loglog_slope={:.2}", data.witness_slope, data.runtime_slope)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_example_row() {
        let d = run_growth(3, &[3], 3).unwrap();
        let row = d.growth.iter().find(|r| r.r == 3).unwrap();
        assert_eq!((row.i, row.exact_length, row.binomial_length), (3, 7, 7));
        assert!((row.ratio.unwrap() - 7.0 / 9.0).abs() < 1e-12);
        assert!(d.growth.iter().all(|r| r.diff == 0));
    }

    #[test]
    fn a1_is_fixed() {
        let d = run_growth(2, &[1], 10).unwrap();
        assert!(d.growth.iter().all(|r| r.exact_length == 1));
    }

    #[test]
    fn distortion_family() {
        let d = run_growth(3, &[2], 4).unwrap();
        // φ^k(a2^k) = (a2 a1^k)^k
        let row = d.distortion.iter().find(|r| r.k == 3).unwrap();
        assert_eq!((row.a_length, row.h_length), (12, 9));
    }

    #[test]
    fn slope_and_median() {
        assert!((slope(&[(1.0, 3.0), (2.0, 5.0), (3.0, 7.0)]) - 2.0).abs() < 1e-12);
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn cl_is_reproducible() {
        let a = run_cl_experiment(3, &[10], 5, 9).unwrap();
        let b = run_cl_experiment(3, &[10], 5, 9).unwrap();
        let strip = |d: &ClData| d.rows.iter().map(|r| (r.n, r.sample, r.witness_len, r.method.clone())).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        assert!(a.rows.iter().all(|r| r.verified));
    }

    #[test]
    fn identity_conjugator_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_word(&mut rng, 3, 7);
        let c = decide_conjugacy(&u, &u, 3, &BoundPolicy::default()).unwrap();
        assert_eq!(c.witness.map(|x| x.len()), Some(0));
    }
}
