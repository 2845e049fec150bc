//! Check suites shared by the integration tests and the acceptance runner.
//! Each returns a short summary on success and the first discrepancy on failure.

use fakery::dataset::ImageRecord;
use fakery::eval::{brier, confusion, pr_auc, roc_auc, threshold_metrics, tune_threshold};
use fakery::features::{
    dct2, dwt2, extract_dct, extract_glcm, extract_hog, extract_lbp, extract_wavelet, WaveletFilters,
};
use fakery::matrix::Matrix;
use fakery::models::{
    logistic_objective, Classifier, ForestMode, ForestModel, ForestParams, GbdtModel, GbdtParams, Growth,
    LinearModel, LogisticParams, Standardizer,
};
use fakery::rng::SplitMix64;
use fakery::GrayImage;

use super::{max_abs_diff, oracles, random_gray, random_instance};

type Check = Result<String, String>;

fn close(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{name}: got {got}, oracle {want} (tol {tol})"))
    }
}

pub fn metric_suite(instances: usize, seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    for case in 0..instances {
        let (y, p) = random_instance(&mut rng, 12);
        let tau = if rng.below(3) == 0 { 0.5 } else { p[rng.below(p.len() as u64) as usize] };
        let m = threshold_metrics(confusion(&y, &p, tau).map_err(|e| e.to_string())?);
        let c = oracles::counts(&y, &p, tau);
        let ctx = |what: &str| format!("case {case} {what} (y={y:?}, p={p:?}, tau={tau})");
        close(&ctx("f1"), m.f1, oracles::f1(&c), 1e-12)?;
        close(&ctx("mcc"), m.mcc, oracles::mcc(&y, &p, tau), 1e-12)?;
        close(&ctx("balanced_accuracy"), m.balanced_accuracy, oracles::balanced_accuracy(&y, &p, tau), 1e-12)?;
        close(&ctx("brier"), brier(&y, &p).unwrap(), oracles::brier(&y, &p), 1e-12)?;
        close(&ctx("roc_auc"), roc_auc(&y, &p).unwrap(), oracles::roc_auc(&y, &p), 1e-12)?;
        close(&ctx("pr_auc"), pr_auc(&y, &p).unwrap(), oracles::average_precision(&y, &p), 1e-12)?;
    }
    Ok(format!("{instances} instances"))
}

pub fn transform_suite(grids: usize, seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    let filters = WaveletFilters::<f64>::db2();
    let (mut worst_dct, mut worst_dwt) = (0.0f64, 0.0f64);
    for case in 0..grids {
        let grid: Vec<f64> = (0..1024).map(|_| rng.next_f64()).collect();
        let fast = dct2(&grid, 32);
        let slow = oracles::dct2(&grid, 32);
        let err = max_abs_diff(&fast, &slow);
        worst_dct = worst_dct.max(err);
        if err > 1e-9 {
            return Err(format!("grid {case}: dct2 differs from the direct sum by {err}"));
        }
        let e_in: f64 = grid.iter().map(|v| v * v).sum();
        let e_out: f64 = fast.iter().map(|v| v * v).sum();
        if (e_in - e_out).abs() > 1e-9 {
            return Err(format!("grid {case}: Parseval off by {}", (e_in - e_out).abs()));
        }

        let gray = random_gray(&mut rng);
        let bands = dwt2(&gray, &filters);
        let oracle = oracles::dwt2(gray.values(), 32);
        for (name, got, want) in [
            ("A", &bands.a, &oracle[0]),
            ("LH", &bands.lh, &oracle[1]),
            ("HL", &bands.hl, &oracle[2]),
            ("HH", &bands.hh, &oracle[3]),
        ] {
            let err = max_abs_diff(got, want);
            worst_dwt = worst_dwt.max(err);
            if err > 1e-9 {
                return Err(format!("image {case}: dwt2 band {name} differs from circular convolution by {err}"));
            }
        }
        let e_in: f64 = gray.values().iter().map(|v| v * v).sum();
        let e_out: f64 = [&bands.a, &bands.lh, &bands.hl, &bands.hh].iter().flat_map(|b| b.iter()).map(|v| v * v).sum();
        let rel = (e_in - e_out).abs() / e_in;
        if rel > 1e-9 {
            return Err(format!("image {case}: dwt2 energy off by {rel} relative"));
        }
    }
    Ok(format!("{grids} grids, max dct err {worst_dct:.1e}, max dwt err {worst_dwt:.1e}"))
}

pub fn descriptor_suite() -> Check {
    for level in [0.0, 37.0, 128.0, 255.0] {
        let gray = GrayImage::constant(level).unwrap();
        let lbp = extract_lbp(&gray);
        if lbp.iter().enumerate().any(|(i, &v)| v != if i == 8 { 1.0 } else { 0.0 }) {
            return Err(format!("constant {level}: LBP {lbp:?}"));
        }
        let glcm = extract_glcm(&gray);
        if glcm.chunks(4).any(|a| a != [0.0, 1.0, 1.0, 1.0]) {
            return Err(format!("constant {level}: GLCM {glcm:?}"));
        }
        let wav = extract_wavelet(&gray);
        let want = [0.0, 0.0, 0.0, 2.0 * level, 0.0];
        if max_abs_diff(&wav, &want) > 1e-12 {
            return Err(format!("constant {level}: wavelet {wav:?}"));
        }
        let hog = extract_hog(&gray);
        if hog.iter().any(|&v| v != 0.0) {
            return Err(format!("constant {level}: HOG not all zero"));
        }
    }
    for (rgb, dc) in [([255u8; 3], 32.0), ([0u8; 3], 0.0)] {
        let dct: Vec<f64> = extract_dct(&ImageRecord::solid(rgb, 0));
        for (ch, block) in dct.chunks(64).enumerate() {
            if (block[0] - dc).abs() > 1e-12 || block[1..].iter().any(|v| v.abs() > 1e-12) {
                return Err(format!("solid {rgb:?}: DCT channel {ch} is not DC-only"));
            }
        }
    }
    Ok("constant images: LBP, GLCM, wavelet, HOG, DCT".into())
}

fn accuracy(model: &impl Classifier<f64>, x: &Matrix<f64>, y: &[u8]) -> f64 {
    let p = model.predict_proba(x).unwrap();
    p.iter().zip(y).filter(|(&pi, &yi)| u8::from(pi >= 0.5) == yi).count() as f64 / y.len() as f64
}

fn random_matrix(rng: &mut SplitMix64, n: usize, d: usize) -> Matrix<f64> {
    Matrix::from_vec(n, d, (0..n * d).map(|_| rng.next_f64() * 4.0 - 2.0).collect()).unwrap()
}

/// Max relative gap between the analytic gradient and central differences.
pub fn logistic_gradient_gap(rng: &mut SplitMix64) -> f64 {
    let n = 2 + rng.below(29) as usize;
    let d = 1 + rng.below(10) as usize;
    let x = random_matrix(rng, n, d);
    let y: Vec<u8> = (0..n).map(|_| rng.below(2) as u8).collect();
    let s = Standardizer::fit(&x);
    let w: Vec<f64> = (0..d).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
    let b = rng.next_f64() - 0.5;
    let l2 = 1e-2;
    let (_, grad, gb) = logistic_objective(&x, &y, &s, &w, b, l2);
    let h = 1e-5;
    let f = |w: &[f64], b: f64| logistic_objective(&x, &y, &s, w, b, l2).0;
    let mut analytic = grad.clone();
    analytic.push(gb);
    let mut numeric = Vec::with_capacity(d + 1);
    for j in 0..d {
        let (mut up, mut down) = (w.clone(), w.clone());
        up[j] += h;
        down[j] -= h;
        numeric.push((f(&up, b) - f(&down, b)) / (2.0 * h));
    }
    numeric.push((f(&w, b + h) - f(&w, b - h)) / (2.0 * h));
    let diff: f64 = analytic.iter().zip(&numeric).map(|(a, n)| (a - n).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
    diff / scale
}

pub fn optimization_suite(seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    let mut worst = 0.0f64;
    for case in 0..20 {
        let gap = logistic_gradient_gap(&mut rng);
        worst = worst.max(gap);
        if gap > 1e-5 {
            return Err(format!("problem {case}: logistic gradient relative error {gap}"));
        }
    }

    let x = random_matrix(&mut rng, 300, 6);
    let y: Vec<u8> = (0..300).map(|_| rng.below(2) as u8).collect();
    for growth in [Growth::leaf_wise(), Growth::level_wise()] {
        let params = GbdtParams { n_trees: 50, growth, ..Default::default() };
        let (_, hist) = GbdtModel::fit_with_history(&x, &y, params).map_err(|e| e.to_string())?;
        if let Some(k) = (1..hist.len()).find(|&k| hist[k] > hist[k - 1]) {
            return Err(format!("{growth:?}: loss rose at round {k}: {} -> {}", hist[k - 1], hist[k]));
        }
    }

    // y = 1[x0 > 0.5] with a margin around the boundary
    let mut rows = Vec::new();
    let mut ys = Vec::new();
    for i in 0..200 {
        let label = (i % 2) as u8;
        let x0 = if label == 1 { 0.6 + 0.4 * rng.next_f64() } else { 0.4 * rng.next_f64() };
        rows.push(vec![x0, rng.next_f64(), rng.next_f64()]);
        ys.push(label);
    }
    let xs = Matrix::from_rows(&rows).unwrap();
    let (gbdt, hist) =
        GbdtModel::fit_with_history(&xs, &ys, GbdtParams { n_trees: 10, ..Default::default() }).map_err(|e| e.to_string())?;
    if !hist.windows(2).all(|w| w[1] < w[0]) {
        return Err(format!("gbdt loss not strictly decreasing on separable data: {hist:?}"));
    }
    if accuracy(&gbdt, &xs, &ys) != 1.0 {
        return Err("gbdt did not separate the margin problem".into());
    }

    let x4 = Matrix::column(&[-2.0, -1.0, 1.0, 2.0]);
    let lr = LinearModel::fit(&x4, &[0, 0, 1, 1], LogisticParams::default()).map_err(|e| e.to_string())?;
    if accuracy(&lr, &x4, &[0, 0, 1, 1]) != 1.0 {
        return Err("logistic regression misclassified the 4-point problem".into());
    }

    let train: Vec<f64> = (0..200).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
    let y_train: Vec<u8> = train.iter().map(|&v| u8::from(v > 0.0)).collect();
    let probe: Vec<f64> = (0..200).map(|i| -0.995 + 0.01 * i as f64).filter(|v| v.abs() > 0.05).collect();
    let y_probe: Vec<u8> = probe.iter().map(|&v| u8::from(v > 0.0)).collect();
    for mode in [ForestMode::RandomForest, ForestMode::ExtraTrees] {
        let f = ForestModel::fit(&Matrix::column(&train), &y_train, ForestParams::new(mode)).map_err(|e| e.to_string())?;
        let acc = accuracy(&f, &Matrix::column(&probe), &y_probe);
        if acc != 1.0 {
            return Err(format!("{mode:?}: out-of-sample accuracy {acc}"));
        }
    }
    Ok(format!("20 gradient checks (max rel err {worst:.1e}), gbdt loss monotone, separable fits exact"))
}

pub fn threshold_suite(instances: usize, seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    let mut cases: Vec<(Vec<u8>, Vec<f64>)> = vec![
        (vec![1, 0], vec![0.6, 0.6]),
        (vec![1, 1, 0, 0], vec![0.9, 0.8, 0.7, 0.1]),
        (vec![1, 0, 1, 0], vec![0.5, 0.5, 0.5, 0.5]),
        (vec![0, 1, 1, 0, 1], vec![0.0, 1.0, 1.0, 1.0, 0.3]),
    ];
    while cases.len() < instances {
        cases.push(random_instance(&mut rng, 12));
    }
    for (y, p) in &cases {
        let got = tune_threshold(y, p).map_err(|e| e.to_string())?;
        let (tau, f1) = oracles::tune(y, p);
        if got.tau_star != tau || (got.val_f1 - f1).abs() > 1e-12 {
            return Err(format!(
                "y={y:?} p={p:?}: tuner chose ({}, {}), brute force ({tau}, {f1})",
                got.tau_star, got.val_f1
            ));
        }
    }
    Ok(format!("{} validation sets", cases.len()))
}
