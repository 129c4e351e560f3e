//! UVD paths, 2-Schröder paths, Dyck paths and the relabeling map `M`.
//!
//! Paths are stored as ASCII step words; heights are recomputed on demand.
//! A UVD path uses `u = (1,1)`, `d = (1,-1)`, `v = (0,-2)`. A 2-Schröder path
//! uses `N = (0,1)`, `E = (1,0)`, `H = (1,1)` and stays weakly above `y = 2x`.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::binom;

/// Default upper bound on the semilength for the path enumerators.
pub const PATH_GUARD: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct UvdPath(Vec<u8>);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SchroederPath(Vec<u8>);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DyckPath(Vec<u8>);

/// `vox` and `block` of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStats {
    pub vox: i64,
    pub block: usize,
}

fn step_delta(c: u8) -> Option<i64> {
    match c {
        b'u' => Some(1),
        b'd' => Some(-1),
        b'v' => Some(-2),
        _ => None,
    }
}

/// Heights after each step of a `u/d/v` word, starting from 0.
pub fn heights(word: &[u8]) -> Vec<i64> {
    let mut h = 0;
    word.iter()
        .map(|&c| {
            h += step_delta(c).expect("u/d/v word");
            h
        })
        .collect()
}

/// Validates a `u/d/v` word as a UVD path.
pub fn validate_uvd(word: &str) -> Result<UvdPath> {
    let bytes = word.as_bytes();
    if let Some(c) = word.chars().find(|c| !matches!(c, 'u' | 'd' | 'v')) {
        return Err(Error::InvalidStep(c));
    }
    for w in bytes.windows(2) {
        match w {
            b"uv" => return Err(Error::ForbiddenFactor("uv")),
            b"vu" => return Err(Error::ForbiddenFactor("vu")),
            _ => {}
        }
    }
    let hs = heights(bytes);
    if let Some(i) = hs.iter().position(|&h| h < 0) {
        return Err(Error::BelowAxis(i + 1));
    }
    if bytes.last() != Some(&b'd') {
        return Err(Error::BadTerminal('d'));
    }
    if hs.last() != Some(&0) {
        return Err(Error::BadEndpoint);
    }
    Ok(UvdPath(bytes.to_vec()))
}

impl UvdPath {
    pub(crate) fn from_bytes_unchecked(word: Vec<u8>) -> Self {
        debug_assert!(validate_uvd(std::str::from_utf8(&word).unwrap()).is_ok());
        UvdPath(word)
    }

    pub fn steps(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("ascii")
    }

    /// `#d + #v`.
    pub fn semilength(&self) -> usize {
        self.0.iter().filter(|&&c| c != b'u').count()
    }

    /// Number of vertical steps.
    pub fn verticals(&self) -> usize {
        self.0.iter().filter(|&&c| c == b'v').count()
    }

    pub fn stats(&self) -> PathStats {
        uvd_stats(self)
    }

    /// Lattice points visited, as `(x, y)`.
    pub fn coordinates(&self) -> Vec<(i64, i64)> {
        let mut pts = vec![(0, 0)];
        let (mut x, mut y) = (0, 0);
        for &c in &self.0 {
            match c {
                b'u' => {
                    x += 1;
                    y += 1
                }
                b'd' => {
                    x += 1;
                    y -= 1
                }
                _ => y -= 2,
            }
            pts.push((x, y));
        }
        pts
    }
}

/// Number of `du` valleys on the x-axis; `-1` for the empty word.
pub fn vox_of(word: &[u8]) -> i64 {
    if word.is_empty() {
        return -1;
    }
    let hs = heights(word);
    (1..word.len())
        .filter(|&i| word[i - 1] == b'd' && word[i] == b'u' && hs[i - 1] == 0)
        .count() as i64
}

/// 1-based indices of the down steps that end on the x-axis.
pub fn return_indices(word: &[u8]) -> Vec<usize> {
    heights(word)
        .iter()
        .enumerate()
        .filter(|&(i, &h)| h == 0 && word[i] == b'd')
        .map(|(i, _)| i + 1)
        .collect()
}

/// Number of returns; 0 for the empty word.
pub fn block_of(word: &[u8]) -> usize {
    return_indices(word).len()
}

pub fn uvd_stats(s: &UvdPath) -> PathStats {
    PathStats { vox: vox_of(&s.0), block: block_of(&s.0) }
}

impl fmt::Display for UvdPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TryFrom<String> for UvdPath {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        validate_uvd(&s)
    }
}

impl From<UvdPath> for String {
    fn from(p: UvdPath) -> String {
        p.to_string()
    }
}

/// Validates an `N/E/H` word as an element of `SP_n`.
pub fn validate_schroeder(word: &str) -> Result<SchroederPath> {
    let bytes = word.as_bytes();
    if let Some(c) = word.chars().find(|c| !matches!(c, 'N' | 'E' | 'H')) {
        return Err(Error::InvalidStep(c));
    }
    for w in bytes.windows(2) {
        match w {
            b"NE" => return Err(Error::ForbiddenFactor("NE")),
            b"EN" => return Err(Error::ForbiddenFactor("EN")),
            _ => {}
        }
    }
    let (mut x, mut y) = (0i64, 0i64);
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'N' => y += 1,
            b'E' => x += 1,
            _ => {
                x += 1;
                y += 1
            }
        }
        if y < 2 * x {
            return Err(Error::BelowAxis(i + 1));
        }
    }
    if bytes.last() != Some(&b'H') {
        return Err(Error::BadTerminal('H'));
    }
    if y != 2 * x {
        return Err(Error::BadEndpoint);
    }
    Ok(SchroederPath(bytes.to_vec()))
}

impl SchroederPath {
    pub fn steps(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("ascii")
    }

    /// x-coordinate of the endpoint.
    pub fn semilength(&self) -> usize {
        self.0.iter().filter(|&&c| c != b'N').count()
    }

    /// Number of diagonal steps ending on `y = 2x`.
    pub fn block(&self) -> usize {
        let (mut x, mut y) = (0i64, 0i64);
        let mut count = 0;
        for &c in &self.0 {
            match c {
                b'N' => y += 1,
                b'E' => x += 1,
                _ => {
                    x += 1;
                    y += 1;
                    if y == 2 * x {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    pub fn coordinates(&self) -> Vec<(i64, i64)> {
        let mut pts = vec![(0, 0)];
        let (mut x, mut y) = (0, 0);
        for &c in &self.0 {
            match c {
                b'N' => y += 1,
                b'E' => x += 1,
                _ => {
                    x += 1;
                    y += 1
                }
            }
            pts.push((x, y));
        }
        pts
    }
}

impl fmt::Display for SchroederPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TryFrom<String> for SchroederPath {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        validate_schroeder(&s)
    }
}

impl From<SchroederPath> for String {
    fn from(p: SchroederPath) -> String {
        p.to_string()
    }
}

/// `M`: `N -> u`, `E -> v`, `H -> d`.
pub fn schroeder_to_uvd(p: &SchroederPath) -> UvdPath {
    let word = p
        .0
        .iter()
        .map(|&c| match c {
            b'N' => b'u',
            b'E' => b'v',
            _ => b'd',
        })
        .collect();
    UvdPath::from_bytes_unchecked(word)
}

/// `M^{-1}`: `u -> N`, `v -> E`, `d -> H`.
pub fn uvd_to_schroeder(s: &UvdPath) -> SchroederPath {
    let word: Vec<u8> = s
        .0
        .iter()
        .map(|&c| match c {
            b'u' => b'N',
            b'v' => b'E',
            _ => b'H',
        })
        .collect();
    debug_assert!(validate_schroeder(std::str::from_utf8(&word).unwrap()).is_ok());
    SchroederPath(word)
}

pub fn validate_dyck(word: &str) -> Result<DyckPath> {
    if let Some(c) = word.chars().find(|c| !matches!(c, 'u' | 'd')) {
        return Err(Error::InvalidStep(c));
    }
    let hs = heights(word.as_bytes());
    if let Some(i) = hs.iter().position(|&h| h < 0) {
        return Err(Error::BelowAxis(i + 1));
    }
    if hs.last().copied().unwrap_or(0) != 0 {
        return Err(Error::BadEndpoint);
    }
    Ok(DyckPath(word.as_bytes().to_vec()))
}

impl DyckPath {
    pub fn steps(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("ascii")
    }

    pub fn semilength(&self) -> usize {
        self.0.len() / 2
    }

    /// Length of the final maximal run of down steps.
    pub fn final_descent(&self) -> usize {
        self.0.iter().rev().take_while(|&&c| c == b'd').count()
    }

    pub fn returns(&self) -> usize {
        block_of(&self.0)
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TryFrom<String> for DyckPath {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        validate_dyck(&s)
    }
}

impl From<DyckPath> for String {
    fn from(p: DyckPath) -> String {
        p.to_string()
    }
}

fn check_guard(what: &'static str, n: usize, guard: usize) -> Result<()> {
    if n > guard {
        Err(Error::GuardExceeded { what, n, guard })
    } else {
        Ok(())
    }
}

/// All UVD paths of semilength `n`, lexicographic with `u < d < v`.
pub fn enumerate_uvd(n: usize) -> Result<Vec<UvdPath>> {
    enumerate_uvd_bounded(n, PATH_GUARD)
}

pub fn enumerate_uvd_bounded(n: usize, guard: usize) -> Result<Vec<UvdPath>> {
    check_guard("enumerate_uvd", n, guard)?;
    let mut out = Vec::new();
    if n > 0 {
        uvd_dfs(&mut Vec::new(), 0, 0, n, &mut out);
    }
    Ok(out)
}

fn uvd_dfs(word: &mut Vec<u8>, height: i64, used: usize, n: usize, out: &mut Vec<UvdPath>) {
    if used == n {
        if height == 0 && word.last() == Some(&b'd') {
            out.push(UvdPath(word.clone()));
        }
        return;
    }
    let left = (n - used) as i64;
    let last = word.last().copied();
    for c in *b"udv" {
        let ok = match c {
            b'u' => last != Some(b'v') && height < 2 * left,
            b'd' => height >= 1,
            _ => last != Some(b'u') && height >= 2 && height - 2 <= 2 * (left - 1),
        };
        if !ok {
            continue;
        }
        let (h, u) = match c {
            b'u' => (height + 1, used),
            b'd' => (height - 1, used + 1),
            _ => (height - 2, used + 1),
        };
        word.push(c);
        uvd_dfs(word, h, u, n, out);
        word.pop();
    }
}

/// All elements of `SP_n`, lexicographic with `N < E < H`.
pub fn enumerate_schroeder(n: usize) -> Result<Vec<SchroederPath>> {
    enumerate_schroeder_bounded(n, PATH_GUARD)
}

pub fn enumerate_schroeder_bounded(n: usize, guard: usize) -> Result<Vec<SchroederPath>> {
    check_guard("enumerate_schroeder", n, guard)?;
    let mut out = Vec::new();
    if n > 0 {
        sp_dfs(&mut Vec::new(), 0, 0, n as i64, &mut out);
    }
    Ok(out)
}

fn sp_dfs(word: &mut Vec<u8>, x: i64, y: i64, n: i64, out: &mut Vec<SchroederPath>) {
    if x == n {
        if y == 2 * n && word.last() == Some(&b'H') {
            out.push(SchroederPath(word.clone()));
        }
        return;
    }
    let last = word.last().copied();
    for c in *b"NEH" {
        let (nx, ny) = match c {
            b'N' => (x, y + 1),
            b'E' => (x + 1, y),
            _ => (x + 1, y + 1),
        };
        let forbidden = matches!((last, c), (Some(b'N'), b'E') | (Some(b'E'), b'N'));
        if forbidden || ny < 2 * nx || ny > 2 * n {
            continue;
        }
        word.push(c);
        sp_dfs(word, nx, ny, n, out);
        word.pop();
    }
}

/// All Dyck paths of semilength `n`, lexicographic with `u < d`.
pub fn enumerate_dyck(n: usize) -> Result<Vec<DyckPath>> {
    enumerate_dyck_bounded(n, PATH_GUARD)
}

pub fn enumerate_dyck_bounded(n: usize, guard: usize) -> Result<Vec<DyckPath>> {
    check_guard("enumerate_dyck", n, guard)?;
    let mut out = Vec::new();
    dyck_dfs(&mut Vec::new(), 0, n, &mut out);
    Ok(out)
}

fn dyck_dfs(word: &mut Vec<u8>, height: usize, n: usize, out: &mut Vec<DyckPath>) {
    if word.len() == 2 * n {
        out.push(DyckPath(word.clone()));
        return;
    }
    let ups = (word.len() + height) / 2;
    if ups < n {
        word.push(b'u');
        dyck_dfs(word, height + 1, n, out);
        word.pop();
    }
    if height > 0 {
        word.push(b'd');
        dyck_dfs(word, height - 1, n, out);
        word.pop();
    }
}

/// Dyck paths of semilength `n` whose final maximal descent has length `k`:
/// `k/n * C(2n-k-1, n-1)`.
pub fn count_dyck_final_descent(n: usize, k: usize) -> Result<BigUint> {
    if k < 1 || k > n {
        return Err(Error::DomainError(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let (n, k) = (n as i64, k as i64);
    let num = binom(2 * n - k - 1, n - 1) * k;
    Ok(crate::formula::exact_div(&num, &n.into())
        .to_biguint()
        .expect("nonnegative"))
}
