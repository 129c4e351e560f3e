//! The maps between labeled F-paths, 102-avoiding inversion sequences,
//! UVD paths and 2-Schröder paths, plus the tiling map on (102, 012)-avoiders.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpath::{validate_lf, LabeledFPath, LabeledStep};
use crate::paths::{block_of, heights, return_indices, schroeder_to_uvd, vox_of, SchroederPath, UvdPath};
use crate::sequence::{contains_pattern, pat, pattern_102, prmx_of, InversionSequence};

/// φ: labeled F-path of semilength `n` to a sequence in `IS_{n+1}(102)`.
pub fn phi(q: &LabeledFPath) -> InversionSequence {
    let mut e: Vec<u32> = vec![0];
    for step in q.steps() {
        phi_step(&mut e, step);
    }
    InversionSequence::from_vec_unchecked(e)
}

fn phi_step(e: &mut Vec<u32>, step: &LabeledStep) {
    let p_hat = prmx_of(e) as i64;
    let m = e.iter().max().copied().unwrap_or(0) + step.a;
    if step.is_rise() {
        e.insert(p_hat as usize, m);
        return;
    }
    let parts = &step.parts;
    let k = parts.len();
    // suffix[i] = b_{i+1} + .. + b_k (0-based i)
    let mut suffix = vec![0i64; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1] + parts[i] as i64;
    }
    let mut js = Vec::with_capacity(k);
    js.push(p_hat + suffix[0] - 1);
    for i in 1..k {
        js.push(p_hat + suffix[i]);
    }
    for &j in js.iter().rev() {
        debug_assert!(j >= 0 && j as usize <= e.len());
        e.insert(j as usize, m);
    }
}

/// φ⁻¹, peeling one step per round.
pub fn phi_inv(e: &InversionSequence) -> Result<LabeledFPath> {
    if e.contains(&pattern_102()) {
        return Err(Error::PatternViolation("102".into()));
    }
    let mut cur: Vec<u32> = e.entries().to_vec();
    let mut rev_steps = Vec::new();
    while cur.len() > 1 {
        let p = prmx_of(&cur);
        let m = *cur.iter().max().expect("nonempty");
        let next = if p < cur.len() { cur[p] as i64 } else { -1 };
        let prev = if p >= 2 { cur[p - 2] as i64 } else { i64::MIN };
        if next < prev {
            cur.remove(p - 1);
            let a = m - cur.iter().max().expect("nonempty");
            rev_steps.push(LabeledStep::rise(a));
        } else {
            let idx: Vec<usize> = (1..=cur.len()).filter(|&i| cur[i - 1] == m).collect();
            cur.retain(|&x| x != m);
            let p_hat = prmx_of(&cur) as i64;
            let a = m - cur.iter().max().expect("nonempty");
            let k = idx.len();
            let i = |j: usize| idx[j - 1] as i64;
            let parts: Vec<i32> = if k == 1 {
                vec![(p as i64 - p_hat) as i32]
            } else {
                (1..=k)
                    .map(|j| match j {
                        1 => i(1) - i(2) + 2,
                        j if j < k => i(j) - i(j + 1) + 1,
                        _ => i(k) - k as i64 - p_hat,
                    } as i32)
                    .collect()
            };
            rev_steps.push(LabeledStep::down(a, parts));
        }
    }
    rev_steps.reverse();
    validate_lf(rev_steps)
}

fn return_at(rets: &[usize], r: i64) -> usize {
    if r == 0 {
        0
    } else {
        rets[(r - 1) as usize]
    }
}

/// ψ: labeled F-path of semilength `n` to a UVD path of semilength `n + 1`.
pub fn psi(q: &LabeledFPath) -> UvdPath {
    let mut s: Vec<u8> = b"ud".to_vec();
    for step in q.steps() {
        s = psi_step(&s, step);
    }
    UvdPath::from_bytes_unchecked(s)
}

fn psi_step(s_hat: &[u8], step: &LabeledStep) -> Vec<u8> {
    let h_hat = vox_of(s_hat);
    let rets = return_indices(s_hat);
    let a = step.a as i64;
    let mut out = Vec::with_capacity(s_hat.len() + 2 * step.parts.len() + 2);
    if step.is_rise() {
        let p = return_at(&rets, h_hat + 1 - a);
        out.extend_from_slice(&s_hat[..p]);
        out.push(b'u');
        out.extend_from_slice(&s_hat[p..]);
        out.push(b'd');
        return out;
    }
    let parts = &step.parts;
    let k = parts.len();
    let mut suffix = vec![0i64; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1] + parts[i] as i64;
    }
    let js: Vec<usize> = (0..=k).map(|i| return_at(&rets, h_hat + 1 + suffix[i] - a)).collect();
    let j0 = js[0];
    let mut p = j0 - 1;
    while p > 0 && s_hat[p - 1] == b'v' {
        p -= 1;
    }
    out.extend_from_slice(&s_hat[..p]);
    for i in 1..=k {
        out.push(b'u');
        out.extend_from_slice(&s_hat[js[i - 1]..js[i]]);
        out.push(b'u');
    }
    out.extend_from_slice(&s_hat[js[k]..]);
    out.extend(std::iter::repeat_n(b'v', k));
    out.extend_from_slice(&s_hat[p..j0]);
    out
}

/// ψ⁻¹, peeling one step per round.
pub fn psi_inv(s: &UvdPath) -> Result<LabeledFPath> {
    let mut cur: Vec<u8> = s.steps().to_vec();
    let mut rev_steps = Vec::new();
    while cur != b"ud" {
        let (next, step) = psi_inv_step(&cur)?;
        rev_steps.push(step);
        cur = next;
    }
    rev_steps.reverse();
    validate_lf(rev_steps)
}

fn bad(msg: &str) -> Error {
    Error::BadTiling(msg.into())
}

fn psi_inv_step(w: &[u8]) -> Result<(Vec<u8>, LabeledStep)> {
    let len = w.len();
    // point heights: pts[i] is the height after the first i steps
    let mut pts = vec![0i64];
    pts.extend(heights(w));
    if w[len - 2] != b'v' {
        let q = (0..len).rev().find(|&i| pts[i] == 0).expect("origin");
        let alpha = &w[..q];
        let beta = &w[q + 1..len - 1];
        let a = block_of(beta) as u32;
        let mut s_hat = alpha.to_vec();
        s_hat.extend_from_slice(beta);
        return Ok((s_hat, LabeledStep::rise(a)));
    }
    let run = w[..len - 1].iter().rev().take_while(|&&c| c == b'v').count();
    let x_end = len - 1 - run;
    let level = 2 * run as i64 + 1;
    debug_assert_eq!(pts[x_end], level);
    let q = (0..x_end).rev().find(|&i| pts[i] < level).ok_or_else(|| inv_err("no start for the last block"))?;
    let tau = &w[q + 1..x_end];
    let mut pos = q + 1;
    let mut lvl = level;
    let mut sigmas: Vec<&[u8]> = Vec::new();
    while lvl >= 3 && w[pos - 1] == b'u' {
        let r = (0..pos - 1)
            .rev()
            .find(|&i| pts[i] <= lvl - 2)
            .ok_or_else(|| inv_err("unbalanced block"))?;
        sigmas.push(&w[r + 1..pos - 1]);
        pos = r;
        lvl -= 2;
    }
    sigmas.reverse();
    let k = sigmas.len();
    if k == 0 || k > run {
        return Err(inv_err("vertical run does not match the block structure"));
    }
    let mut s_hat = w[..pos].to_vec();
    s_hat.extend(std::iter::repeat_n(b'v', run - k));
    s_hat.push(b'd');
    for sg in &sigmas {
        s_hat.extend_from_slice(sg);
    }
    s_hat.extend_from_slice(tau);
    let a = block_of(tau) as u32;
    let parts = sigmas.iter().map(|sg| -(block_of(sg) as i32)).collect();
    Ok((s_hat, LabeledStep::down(a, parts)))
}

fn inv_err(msg: &str) -> Error {
    Error::DomainError(format!("psi_inv: {msg}"))
}

/// φ ∘ ψ⁻¹ ∘ M.
pub fn schroeder_to_is(p: &SchroederPath) -> Result<InversionSequence> {
    Ok(phi(&psi_inv(&schroeder_to_uvd(p))?))
}

/// A tiling of a `1 x L` board by squares `S` and dominoes `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Tiling(Vec<u8>);

impl Tiling {
    pub fn parse(word: &str) -> Result<Self> {
        if let Some(c) = word.chars().find(|&c| c != 'S' && c != 'D') {
            return Err(Error::InvalidStep(c));
        }
        Ok(Tiling(word.as_bytes().to_vec()))
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("ascii")
    }

    /// `#S + 2 #D`.
    pub fn board_length(&self) -> usize {
        self.0.iter().map(|&c| if c == b'S' { 1 } else { 2 }).sum()
    }
}

impl TryFrom<String> for Tiling {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Tiling::parse(&s)
    }
}

impl From<Tiling> for String {
    fn from(t: Tiling) -> Self {
        t.as_str().to_owned()
    }
}

impl fmt::Display for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The tiling of length `2n - 2` attached to `e ∈ IS_n(102, 012)`.
pub fn is_to_tiling(e: &InversionSequence) -> Result<Tiling> {
    for p in ["102", "012"] {
        if contains_pattern(e.entries(), &pat(p)) {
            return Err(Error::PatternViolation(p.into()));
        }
    }
    let n = e.len();
    let m = e.max_value() as usize;
    if m == 0 {
        return Ok(Tiling(b"D".repeat(n - 1)));
    }
    let nonzero: Vec<u32> = e.entries().iter().copied().filter(|&x| x > 0).collect();
    let mut out = Vec::with_capacity(2 * n);
    let mut j = 0;
    for &x in &e.entries()[m..] {
        if x == 0 {
            out.push(b'D');
            continue;
        }
        let b = nonzero.get(j + 1).map_or(x - 1, |&y| x - y);
        out.push(b'S');
        out.extend(std::iter::repeat_n(b'D', b as usize));
        out.push(b'S');
        j += 1;
    }
    debug_assert_eq!(j, nonzero.len());
    Ok(Tiling(out))
}

/// Inverse of [`is_to_tiling`] for sequences of length `n`.
pub fn tiling_to_is(t: &Tiling, n: usize) -> Result<InversionSequence> {
    if n == 0 {
        return Err(Error::DomainError("n must be at least 1".into()));
    }
    let expected = 2 * n - 2;
    if t.board_length() != expected {
        return Err(Error::BadBoardLength { expected, found: t.board_length() });
    }
    // tokens: None for a lone domino, Some(b) for S D^b S
    let mut tokens: Vec<Option<u32>> = Vec::new();
    let mut it = t.0.iter();
    while let Some(&c) = it.next() {
        if c == b'D' {
            tokens.push(None);
            continue;
        }
        let mut b = 0;
        loop {
            match it.next() {
                Some(b'D') => b += 1,
                Some(_) => break,
                None => return Err(bad("unpaired square")),
            }
        }
        tokens.push(Some(b));
    }
    if tokens.iter().all(Option::is_none) {
        return Ok(InversionSequence::zeros(n));
    }
    let m = n - tokens.len();
    let mut values = vec![0u32; tokens.len()];
    let mut acc = 1;
    for (slot, tok) in values.iter_mut().zip(&tokens).rev() {
        if let Some(b) = tok {
            acc += b;
            *slot = acc;
        }
    }
    debug_assert_eq!(acc as usize, m);
    let mut e = vec![0u32; m];
    e.extend(values);
    InversionSequence::new(e)
}

/// All tilings of a board of the given length, in lexicographic order (`D < S`).
pub fn enumerate_tilings(len: usize) -> Vec<Tiling> {
    fn go(rem: usize, cur: &mut Vec<u8>, out: &mut Vec<Tiling>) {
        if rem == 0 {
            out.push(Tiling(cur.clone()));
            return;
        }
        if rem >= 2 {
            cur.push(b'D');
            go(rem - 2, cur, out);
            cur.pop();
        }
        cur.push(b'S');
        go(rem - 1, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(len, &mut Vec::new(), &mut out);
    out
}

/// Whether the tiling starts with `D^i S^{2t-2i+2} D` or `D^i S^{2t-2i+1} D`
/// for some `0 <= i <= t`.
pub fn has_rank_prefix(t: &Tiling, rank: usize) -> bool {
    let w = &t.0;
    (0..=rank).any(|i| {
        [2 * rank - 2 * i + 2, 2 * rank - 2 * i + 1].into_iter().any(|s| {
            let mut want = vec![b'D'; i];
            want.extend(std::iter::repeat_n(b'S', s));
            want.push(b'D');
            w.starts_with(&want)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpath::sample_path;
    use crate::paths::validate_uvd;

    fn seq(s: &str) -> InversionSequence {
        InversionSequence::new(s.bytes().map(|c| (c - b'0') as u32).collect()).unwrap()
    }

    fn prefix(q: &LabeledFPath, j: usize) -> LabeledFPath {
        validate_lf(q.steps()[..j].to_vec()).unwrap()
    }

    #[test]
    fn phi_worked_example() {
        let q = sample_path();
        assert_eq!(phi(&LabeledFPath::empty()).entries(), &[0]);
        assert_eq!(phi(&prefix(&q, 3)), seq("0000"));
        assert_eq!(phi(&prefix(&q, 4)), seq("00001"));
        assert_eq!(phi(&prefix(&q, 5)), seq("000014"));
        assert_eq!(phi(&prefix(&q, 9)), seq("0000144444"));
        assert_eq!(phi(&prefix(&q, 10)), seq("00001444464"));
        assert_eq!(phi(&prefix(&q, 12)), seq("0000144446664"));
        assert_eq!(phi(&prefix(&q, 13)), seq("00001444467664"));
        assert_eq!(phi(&prefix(&q, 17)), seq("000014444677777664"));
        assert_eq!(phi(&prefix(&q, 18)), seq("000014444677778788664"));
        let full = phi(&q);
        assert_eq!(full.entries(), &[0, 0, 0, 0, 1, 4, 4, 4, 4, 6, 7, 7, 9, 7, 9, 7, 9, 9, 8, 7, 8, 8, 6, 6, 4]);
        assert_eq!(full.prmx(), 13);
        assert_eq!(full.rank_value(), 3);
    }

    #[test]
    fn phi_inv_worked_example() {
        let q = sample_path();
        assert_eq!(phi_inv(&phi(&q)).unwrap(), q);
        assert_eq!(phi_inv(&seq("0")).unwrap(), LabeledFPath::empty());
        assert_eq!(phi_inv(&seq("00001")).unwrap(), prefix(&q, 4));
        assert!(matches!(phi_inv(&seq("0102")), Err(Error::PatternViolation(_))));
    }

    #[test]
    fn psi_worked_example() {
        let q = sample_path();
        let cases = [
            (3, "udududud"),
            (4, "udududuudd"),
            (5, "uduududuuddd"),
            (9, "uduududuudddudududud"),
            (10, "uduududuuddduduuuududvd"),
            (12, "uduududuuddduduuuududvdudud"),
            (13, "uduududuuddduduuuududuuduudvvd"),
            (17, "uduududuuddduduuuududuuduudvvdudududud"),
            (18, "uduududuuddduduuuududuuduudvvdududuuuuuuuudvvvd"),
            (19, "uduududuuddduduuuududuuduuduuuuduuuuuduuuuuuuuudvvvdvvvvvvd"),
        ];
        assert_eq!(psi(&LabeledFPath::empty()).as_str(), "ud");
        for (j, want) in cases {
            let got = psi(&prefix(&q, j));
            assert_eq!(got.as_str(), want, "S^({j})");
            assert!(validate_uvd(want).is_ok());
            assert_eq!(vox_of(got.steps()), prefix(&q, j).height());
        }
    }

    #[test]
    fn psi_inv_worked_example() {
        let q = sample_path();
        assert_eq!(psi_inv(&psi(&q)).unwrap(), q);
        assert_eq!(psi_inv(&validate_uvd("ud").unwrap()).unwrap(), LabeledFPath::empty());
        assert_eq!(psi_inv(&validate_uvd("udududud").unwrap()).unwrap(), prefix(&q, 3));
    }

    #[test]
    fn composed_map_base() {
        let p = crate::paths::validate_schroeder("NH").unwrap();
        assert_eq!(schroeder_to_is(&p).unwrap().entries(), &[0]);
    }

    #[test]
    fn tiling_examples() {
        let cases = [("000", "DD"), ("001", "DSS"), ("011", "SSSS"), ("010", "SSD"), ("002", "SDS")];
        for (e, t) in cases {
            let e = seq(e);
            assert_eq!(is_to_tiling(&e).unwrap().as_str(), t);
            assert_eq!(tiling_to_is(&Tiling::parse(t).unwrap(), 3).unwrap(), e);
        }
        assert!(matches!(is_to_tiling(&seq("012")), Err(Error::PatternViolation(_))));
        assert_eq!(
            tiling_to_is(&Tiling::parse("DDD").unwrap(), 3),
            Err(Error::BadBoardLength { expected: 4, found: 6 })
        );
        assert!(tiling_to_is(&Tiling::parse("SDDD").unwrap(), 4).is_err());
        assert!(Tiling::parse("SX").is_err());
    }

    #[test]
    fn tilings_enumerate() {
        assert_eq!(enumerate_tilings(4).len(), 5);
        assert_eq!(enumerate_tilings(0).len(), 1);
        assert!(has_rank_prefix(&Tiling::parse("SSDD").unwrap(), 0));
        assert!(has_rank_prefix(&Tiling::parse("SDSD").unwrap(), 0));
        assert!(!has_rank_prefix(&Tiling::parse("DDSS").unwrap(), 0));
    }
}
