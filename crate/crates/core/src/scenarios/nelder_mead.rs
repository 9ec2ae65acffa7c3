//! Nelder–Mead simplex minimization with an optional projection applied to
//! every proposed vertex.

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Edge length of the initial simplex around the start point.
    pub initial_step: f64,
    /// Stop once the spread of function values over the simplex falls below this.
    pub f_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            initial_step: 0.25,
            f_tol: 1e-15,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Minimizes `f` starting from `x0`. `project` maps every candidate back onto
/// the feasible set before it is evaluated.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    project: impl Fn(Vec<f64>) -> Vec<f64>,
    x0: &[f64],
    opts: NelderMeadOptions,
) -> NelderMeadResult {
    let dim = x0.len();
    let eval = |x: Vec<f64>| {
        let x = project(x);
        let v = f(&x);
        (x, if v.is_nan() { f64::INFINITY } else { v })
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push(eval(x0.to_vec()));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += if x[i] >= 0.0 { opts.initial_step } else { -opts.initial_step };
        simplex.push(eval(x));
    }

    let mut iterations = 0;
    while iterations < opts.max_iterations && dim > 0 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[dim].1 - simplex[0].1 <= opts.f_tol {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();

        let reflected = eval(lerp(&centroid, &worst.0, -REFLECT));
        if reflected.1 < simplex[0].1 {
            let expanded = eval(lerp(&centroid, &worst.0, -EXPAND));
            simplex[dim] = if expanded.1 < reflected.1 { expanded } else { reflected };
            continue;
        }
        if reflected.1 < simplex[dim - 1].1 {
            simplex[dim] = reflected;
            continue;
        }
        // outside contraction if the reflection helped a little, inside otherwise
        let contracted = if reflected.1 < worst.1 {
            eval(lerp(&centroid, &reflected.0, CONTRACT))
        } else {
            eval(lerp(&centroid, &worst.0, CONTRACT))
        };
        if contracted.1 < worst.1.min(reflected.1) {
            simplex[dim] = contracted;
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            *vertex = eval(lerp(&best, &vertex.0, SHRINK));
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        value,
        iterations,
    }
}
