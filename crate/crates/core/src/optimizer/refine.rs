//! Nelder-Mead on reduced simplex coordinates.

/// Euclidean projection of `v` onto the probability simplex.
pub fn project_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut tau = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

/// Maps between full block coordinates and the `k - 1` free coordinates per block.
pub(crate) struct Reduced {
    widths: Vec<usize>,
}

impl Reduced {
    pub fn new(widths: Vec<usize>) -> Self {
        Self { widths }
    }

    pub fn dimension(&self) -> usize {
        self.widths.iter().map(|k| k - 1).sum()
    }

    pub fn reduce(&self, theta: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dimension());
        let mut off = 0;
        for &k in &self.widths {
            out.extend_from_slice(&theta[off..off + k - 1]);
            off += k;
        }
        out
    }

    pub fn expand(&self, z: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.widths.iter().sum());
        let mut off = 0;
        for &k in &self.widths {
            let start = out.len();
            let free = &z[off..off + k - 1];
            out.extend_from_slice(free);
            out.push(1.0 - free.iter().sum::<f64>());
            project_simplex(&mut out[start..]);
            off += k - 1;
        }
        out
    }
}

pub(crate) struct NmOutcome {
    pub point: Vec<f64>,
    pub evaluations: usize,
}

/// Minimizes `f` from `x0`. An initial vertex whose image under `same_as_x0`
/// coincides with `x0` is stepped the other way.
pub(crate) fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_iter: usize,
    same_as_x0: &dyn Fn(&[f64]) -> bool,
) -> NmOutcome {
    let n = x0.len();
    if n == 0 {
        return NmOutcome {
            point: Vec::new(),
            evaluations: 0,
        };
    }
    let mut evals = 0;
    let mut eval = |x: &[f64]| {
        evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        if same_as_x0(&x) {
            x[i] = x0[i] - step;
        }
        let v = eval(&x);
        simplex.push((x, v));
    }
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.abs() < 1e-13 && size < 1e-9 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(alpha);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(gamma);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let x = along(rho);
            let v = eval(&x);
            (x, v)
        } else {
            let x = along(-rho);
            let v = eval(&x);
            (x, v)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for item in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&item.0)
                .map(|(b, xi)| b + sigma * (xi - b))
                .collect();
            let v = eval(&x);
            *item = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    NmOutcome {
        point: simplex.swap_remove(0).0,
        evaluations: evals,
    }
}
