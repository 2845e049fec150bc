use std::f64::consts::PI;

/// Direct double-sum orthonormal DCT-II of an `n x n` row-major grid.
pub fn dct2(grid: &[f64], n: usize) -> Vec<f64> {
    let alpha = |k: usize| if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
    let mut out = vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += grid[i * n + j]
                        * (PI * (2 * i + 1) as f64 * u as f64 / (2 * n) as f64).cos()
                        * (PI * (2 * j + 1) as f64 * v as f64 / (2 * n) as f64).cos();
                }
            }
            out[u * n + v] = alpha(u) * alpha(v) * s;
        }
    }
    out
}

pub fn db2_low() -> [f64; 4] {
    let s3 = 3f64.sqrt();
    let d = 4.0 * 2f64.sqrt();
    [(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d]
}

pub fn db2_high() -> [f64; 4] {
    let l = db2_low();
    [l[3], -l[2], l[1], -l[0]]
}

/// Level-1 periodised 2D DWT by explicit circular convolution over both axes.
/// Returns `(A, LH, HL, HH)` where the first letter is the filter applied along rows.
pub fn dwt2(x: &[f64], side: usize) -> [Vec<f64>; 4] {
    let (lo, hi) = (db2_low(), db2_high());
    let half = side / 2;
    let band = |fr: &[f64; 4], fc: &[f64; 4]| {
        let mut out = vec![0.0; half * half];
        for i in 0..half {
            for j in 0..half {
                let mut s = 0.0;
                for (m, &wc) in fc.iter().enumerate() {
                    for (k, &wr) in fr.iter().enumerate() {
                        let r = (2 * i + side * 4 - m) % side;
                        let c = (2 * j + side * 4 - k) % side;
                        // fr filters along each row (column index), fc along each column (row index)
                        s += wc * wr * x[r * side + c];
                    }
                }
                out[i * half + j] = s;
            }
        }
        out
    };
    [band(&lo, &lo), band(&lo, &hi), band(&hi, &lo), band(&hi, &hi)]
}

/// HOG by per-pixel voting with triangular bin kernels on the circle of 180 degrees.
pub fn hog(g: &[f64]) -> Vec<f64> {
    const N: usize = 32;
    let at = |r: isize, c: isize| g[r.clamp(0, 31) as usize * N + c.clamp(0, 31) as usize];
    let mut cells = vec![[0.0f64; 9]; 16];
    for r in 0..N as isize {
        for c in 0..N as isize {
            let gx = at(r, c + 1) - at(r, c - 1);
            let gy = at(r + 1, c) - at(r - 1, c);
            let mag = gx.hypot(gy);
            if mag == 0.0 {
                continue;
            }
            // direction of the edge, perpendicular to the gradient
            let mut theta = gx.atan2(-gy).to_degrees();
            while theta < 0.0 {
                theta += 180.0;
            }
            while theta >= 180.0 {
                theta -= 180.0;
            }
            let cell = &mut cells[(r as usize / 8) * 4 + c as usize / 8];
            for (k, slot) in cell.iter_mut().enumerate() {
                let centre = 10.0 + 20.0 * k as f64;
                let d = (theta - centre).abs();
                let d = d.min(180.0 - d);
                *slot += mag * (1.0 - d / 20.0).max(0.0);
            }
        }
    }
    let mut out = Vec::with_capacity(324);
    for br in 0..3 {
        for bc in 0..3 {
            let mut v: Vec<f64> = Vec::with_capacity(36);
            for cr in br..br + 2 {
                for cc in bc..bc + 2 {
                    v.extend_from_slice(&cells[cr * 4 + cc]);
                }
            }
            let n1 = (v.iter().map(|x| x * x).sum::<f64>() + 1e-12).sqrt();
            let clipped: Vec<f64> = v.iter().map(|x| (x / n1).min(0.2)).collect();
            let n2 = (clipped.iter().map(|x| x * x).sum::<f64>() + 1e-12).sqrt();
            out.extend(clipped.iter().map(|x| x / n2));
        }
    }
    out
}

pub fn lbp_code(g: &[f64], r: usize, c: usize) -> u8 {
    let centre = g[r * 32 + c];
    let nb = [
        (r, c + 1),
        (r - 1, c + 1),
        (r - 1, c),
        (r - 1, c - 1),
        (r, c - 1),
        (r + 1, c - 1),
        (r + 1, c),
        (r + 1, c + 1),
    ];
    let mut code = 0u8;
    for (p, &(rr, cc)) in nb.iter().enumerate() {
        if g[rr * 32 + cc] - centre >= 0.0 {
            code |= 1 << p;
        }
    }
    code
}

pub fn uniform(code: u8) -> usize {
    let bits: Vec<u8> = (0..8).map(|p| (code >> p) & 1).collect();
    let transitions = (0..8).filter(|&p| bits[p] != bits[(p + 1) % 8]).count();
    if transitions <= 2 {
        bits.iter().map(|&b| b as usize).sum()
    } else {
        9
    }
}

pub fn lbp_hist(g: &[f64]) -> Vec<f64> {
    let mut h = [0.0; 16];
    for r in 1..31 {
        for c in 1..31 {
            h[uniform(lbp_code(g, r, c))] += 1.0;
        }
    }
    h.iter().map(|v| v / 900.0).collect()
}

pub struct Counts {
    pub tp: f64,
    pub fp: f64,
    pub tn: f64,
    pub fn_: f64,
}

pub fn counts(y: &[u8], p: &[f64], tau: f64) -> Counts {
    let mut c = Counts { tp: 0.0, fp: 0.0, tn: 0.0, fn_: 0.0 };
    for (&yi, &pi) in y.iter().zip(p) {
        let pred = pi >= tau;
        match (yi, pred) {
            (1, true) => c.tp += 1.0,
            (1, false) => c.fn_ += 1.0,
            (_, true) => c.fp += 1.0,
            (_, false) => c.tn += 1.0,
        }
    }
    c
}

/// Harmonic mean of precision and recall, 0 when undefined.
pub fn f1(c: &Counts) -> f64 {
    let p = if c.tp + c.fp > 0.0 { c.tp / (c.tp + c.fp) } else { 0.0 };
    let r = if c.tp + c.fn_ > 0.0 { c.tp / (c.tp + c.fn_) } else { 0.0 };
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Mean of per-class hit rates.
pub fn balanced_accuracy(y: &[u8], p: &[f64], tau: f64) -> f64 {
    let mut rates = Vec::new();
    for class in [0u8, 1] {
        let members: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        let hits = members.iter().filter(|&&i| u8::from(p[i] >= tau) == class).count();
        rates.push(if members.is_empty() { 0.0 } else { hits as f64 / members.len() as f64 });
    }
    (rates[0] + rates[1]) / 2.0
}

/// Pearson correlation between labels and binary predictions, 0 when either is constant.
pub fn mcc(y: &[u8], p: &[f64], tau: f64) -> f64 {
    let a: Vec<f64> = y.iter().map(|&v| v as f64).collect();
    let b: Vec<f64> = p.iter().map(|&v| if v >= tau { 1.0 } else { 0.0 }).collect();
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        cov / (va * vb).sqrt()
    }
}

pub fn brier(y: &[u8], p: &[f64]) -> f64 {
    y.iter().zip(p).map(|(&a, &b)| (b - a as f64).powi(2)).sum::<f64>() / y.len() as f64
}

/// Fraction of (positive, negative) pairs ranked correctly, ties counting half.
pub fn roc_auc(y: &[u8], p: &[f64]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for i in 0..y.len() {
        for j in 0..y.len() {
            if y[i] == 1 && y[j] == 0 {
                pairs += 1.0;
                if p[i] > p[j] {
                    wins += 1.0;
                } else if p[i] == p[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// Step sum over the distinct thresholds, from the highest down.
pub fn average_precision(y: &[u8], p: &[f64]) -> f64 {
    let mut thresholds: Vec<f64> = p.to_vec();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();
    let n_pos = y.iter().filter(|&&v| v == 1).count() as f64;
    let (mut ap, mut prev_recall) = (0.0, 0.0);
    for t in thresholds {
        let c = counts(y, p, t);
        let recall = c.tp / n_pos;
        let precision = c.tp / (c.tp + c.fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    ap
}

/// Exhaustive threshold scan under the declared rule: F1, then balanced accuracy, then smaller tau.
pub fn tune(y: &[u8], p: &[f64]) -> (f64, f64) {
    let mut cands: Vec<f64> = p.to_vec();
    cands.push(0.0);
    cands.push(1.0);
    let mut best: Option<(f64, f64, f64)> = None;
    for &t in &cands {
        let f = f1(&counts(y, p, t));
        let b = balanced_accuracy(y, p, t);
        let replace = match best {
            None => true,
            Some((bt, bf, bb)) => {
                // the two F1 formulas can differ in the last bit, so near-equal scores tie
                let tie = |a: f64, b: f64| (a - b).abs() <= 1e-12;
                (f > bf && !tie(f, bf)) || (tie(f, bf) && ((b > bb && !tie(b, bb)) || (tie(b, bb) && t < bt)))
            }
        };
        if replace {
            best = Some((t, f, b));
        }
    }
    let (t, f, _) = best.unwrap();
    (t, f)
}
