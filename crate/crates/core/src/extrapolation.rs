//! Sequence acceleration: Wynn's epsilon algorithm for partial sums and
//! Richardson (Neville) extrapolation for parameter ladders.

/// Number of trailing partial sums fed to the epsilon table.
const EPSILON_WINDOW: usize = 40;

/// Incremental epsilon-algorithm accelerator for a real sequence.
#[derive(Debug, Clone, Default)]
pub struct WynnEpsilon {
    sums: Vec<f64>,
    estimates: Vec<f64>,
}

impl WynnEpsilon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// Adds the next partial sum and returns `(estimate, error_estimate)`.
    ///
    /// The error estimate combines the spread of the selected table entry
    /// against its column neighbour with the movement of the estimate over the
    /// last two pushes. It is `f64::INFINITY` until three sums are known.
    pub fn push(&mut self, s: f64) -> (f64, f64) {
        self.sums.push(s);
        let start = self.sums.len().saturating_sub(EPSILON_WINDOW);
        let (est, col_err) = epsilon_table(&self.sums[start..]);
        self.estimates.push(est);
        let n = self.estimates.len();
        if n < 3 {
            return (est, f64::INFINITY);
        }
        let hist = (est - self.estimates[n - 2]).abs().max((est - self.estimates[n - 3]).abs());
        (est, col_err.max(hist))
    }

    pub fn estimate(&self) -> Option<f64> {
        self.estimates.last().copied()
    }
}

/// Builds the epsilon table for `s` and returns the best even-column entry on
/// the last diagonal together with its column spread.
fn epsilon_table(s: &[f64]) -> (f64, f64) {
    let n = s.len();
    let last = s[n - 1];
    if n < 3 {
        let err = if n == 2 { (s[1] - s[0]).abs() } else { f64::INFINITY };
        return (last, err);
    }
    let scale = s.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut best = last;
    let mut best_err = (s[n - 1] - s[n - 2]).abs();
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut col = 0usize;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut degenerate = false;
        for k in 0..cur.len() - 1 {
            let d = cur[k + 1] - cur[k];
            if d.abs() <= 4.0 * f64::EPSILON * scale || !d.is_finite() {
                degenerate = true;
                break;
            }
            next.push(prev[k + 1] + 1.0 / d);
        }
        if degenerate {
            // two entries of the current column agree to rounding: if this
            // is an estimate column its last entry is the limit
            if col.is_multiple_of(2) {
                let v = cur[cur.len() - 1];
                if v.is_finite() {
                    let err = (cur[cur.len() - 1] - cur[cur.len() - 2]).abs();
                    if err <= best_err {
                        best = v;
                        best_err = err;
                    }
                }
            }
            break;
        }
        col += 1;
        if col.is_multiple_of(2) && next.len() >= 2 {
            let v = next[next.len() - 1];
            let err = (next[next.len() - 1] - next[next.len() - 2]).abs();
            if v.is_finite() && err.is_finite() && err < best_err {
                best = v;
                best_err = err;
            }
        }
        prev = cur;
        cur = next;
    }
    (best, best_err)
}

/// Polynomial (Neville) extrapolation to `h = 0` of `values[k] ~ v(h[k])`.
///
/// Returns, for every k, the entry of the highest order available with at
/// most `max_order` eliminated terms, using only `values[..=k]`.
pub fn richardson(h: &[f64], values: &[f64], max_order: usize) -> Vec<f64> {
    assert_eq!(h.len(), values.len());
    let n = values.len();
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = vec![values[k]];
        for j in 1..=k.min(max_order) {
            let hk = h[k];
            let hkj = h[k - j];
            let t = (hkj * row[j - 1] - hk * table[k - 1][j - 1]) / (hkj - hk);
            row.push(t);
        }
        out.push(*row.last().unwrap());
        table.push(row);
    }
    out
}

/// Ratio of the last two successive differences of `v`: about 1/2 for an
/// error that halves along the ladder.
pub fn rate_estimate(v: &[f64]) -> Option<f64> {
    let n = v.len();
    if n < 3 {
        return None;
    }
    let d1 = v[n - 1] - v[n - 2];
    let d0 = v[n - 2] - v[n - 3];
    if d0 == 0.0 || !d0.is_finite() || !d1.is_finite() {
        return None;
    }
    Some((d1 / d0).abs())
}

/// True when the last three entries of `v` lie within `tol` of each other.
pub fn last_three_agree(v: &[f64], tol: f64) -> bool {
    let n = v.len();
    if n < 3 {
        return false;
    }
    let w = &v[n - 3..];
    let hi = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_accelerates_alternating_harmonic() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut w = WynnEpsilon::new();
        let mut s = 0.0;
        let mut last = (0.0, f64::INFINITY);
        for k in 1..=20 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            last = w.push(s);
        }
        assert!((last.0 - 2f64.ln()).abs() < 1e-12, "{}", last.0);
        assert!(last.1 < 1e-8);
    }

    #[test]
    fn epsilon_exact_on_geometric() {
        let mut w = WynnEpsilon::new();
        let mut s = 0.0;
        let mut est = 0.0;
        for k in 0..6 {
            s += 0.9f64.powi(k);
            est = w.push(s).0;
        }
        assert!((est - 10.0).abs() < 1e-10);
    }

    #[test]
    fn epsilon_handles_constant_sequence() {
        let mut w = WynnEpsilon::new();
        for _ in 0..5 {
            w.push(3.0);
        }
        let (e, err) = w.push(3.0);
        assert_eq!(e, 3.0);
        assert_eq!(err, 0.0);
    }

    #[test]
    fn richardson_removes_power_terms() {
        let h: Vec<f64> = (0..8).map(|k| 0.5f64.powi(k)).collect();
        let v: Vec<f64> = h.iter().map(|&x| 2.0 + 3.0 * x - x * x + 0.5 * x * x * x).collect();
        let r = richardson(&h, &v, 3);
        assert!((r[7] - 2.0).abs() < 1e-13);
        assert!((r[3] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn rate_of_halving_error() {
        let v: Vec<f64> = (0..6).map(|k| 1.0 + 0.5f64.powi(k)).collect();
        assert!((rate_estimate(&v).unwrap() - 0.5).abs() < 1e-12);
        assert!(last_three_agree(&[1.0, 1.0 + 1e-9, 1.0 - 1e-9], 3e-9));
        assert!(!last_three_agree(&[1.0, 2.0], 10.0));
    }
}
