//! Fujishige–Wolfe minimum-norm point over the base polytope of
//! `F(A) = f(A) - f(∅)`.

use crate::model::ElementSet;

const MAX_MAJOR: usize = 2000;
const MAX_MINOR: usize = 2000;
const WEIGHT_EPS: f64 = 1e-12;

pub(super) struct Outcome {
    pub best: ElementSet,
    pub best_value: f64,
    pub gap: f64,
    pub certified: bool,
    pub iterations: usize,
}

/// Greedy vertex of the base polytope for the order `order`, plus the value of
/// every prefix of that order (`prefix[0]` is `F(∅) = 0`).
struct Vertex {
    point: Vec<f64>,
    prefix: Vec<f64>,
    order: Vec<usize>,
}

fn greedy_vertex(ground: &[usize], f: &impl Fn(&ElementSet) -> f64, f_empty: f64, weights: &[f64]) -> Vertex {
    let k = ground.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    let mut point = vec![0.0; k];
    let mut prefix = Vec::with_capacity(k + 1);
    prefix.push(0.0);
    let mut s = ElementSet::new();
    let mut prev = 0.0;
    for &i in &order {
        s.insert(ground[i]);
        let v = f(&s) - f_empty;
        point[i] = v - prev;
        prefix.push(v);
        prev = v;
    }
    Vertex { point, prefix, order }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(points: &[Vec<f64>], lambda: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (p, &l) in points.iter().zip(lambda) {
        for (xi, pi) in x.iter_mut().zip(p) {
            *xi += l * pi;
        }
    }
    x
}

/// Coefficients of the minimum-norm point of the affine hull of `points`:
/// solves `[G 1; 1ᵀ 0] [α; μ] = [0; 1]` with `G` the Gram matrix.
fn affine_minimizer(points: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = points.len();
    let dim = k + 1;
    let mut a = vec![vec![0.0; dim + 1]; dim];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = dot(&points[i], &points[j]);
        }
        a[i][k] = 1.0;
        a[k][i] = 1.0;
    }
    a[k][dim] = 1.0;
    let scale = a.iter().flat_map(|r| r.iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for col in 0..dim {
        let piv = (col..dim).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() < 1e-13 * scale {
            return None;
        }
        a.swap(col, piv);
        for r in 0..dim {
            if r != col {
                let factor = a[r][col] / a[col][col];
                if factor != 0.0 {
                    for c in col..=dim {
                        a[r][c] -= factor * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..k).map(|i| a[i][dim] / a[i][i]).collect())
}

pub(super) fn run(ground: &[usize], f: impl Fn(&ElementSet) -> f64) -> Outcome {
    let k = ground.len();
    let f_empty = f(&ElementSet::new());
    let to_set = |v: &Vertex, len: usize| -> ElementSet { v.order[..len].iter().map(|&i| ground[i]).collect() };

    let first = greedy_vertex(ground, &f, f_empty, &vec![0.0; k]);
    let mut x = first.point.clone();
    let mut points = vec![first.point.clone()];
    let mut lambda = vec![1.0];

    let mut best = ElementSet::new();
    let mut best_value = 0.0;
    let mut gap = f64::INFINITY;
    let mut iterations = 0;

    for iteration in 0..MAX_MAJOR {
        iterations = iteration + 1;
        let q = greedy_vertex(ground, &f, f_empty, &x);

        // Prefixes of the order sorted by x are the level sets of x; the
        // smallest prefix attaining the minimum is the candidate.
        let (mut bi, mut bv) = (0, 0.0);
        for (i, &v) in q.prefix.iter().enumerate() {
            if v < bv - 1e-12 {
                bi = i;
                bv = v;
            }
        }
        if bv < best_value - 1e-12 || iteration == 0 {
            best = to_set(&q, bi);
            best_value = bv;
        }
        let lower: f64 = x.iter().map(|&v| v.min(0.0)).sum();
        let scale = 1.0 + x.iter().map(|v| v.abs()).sum::<f64>();
        gap = best_value - lower;
        if gap <= 1e-10 * scale {
            return Outcome { best, best_value: best_value + f_empty, gap, certified: true, iterations: iteration };
        }

        let xx = dot(&x, &x);
        if xx - dot(&x, &q.point) <= 1e-14 * scale * scale {
            break;
        }
        if points.iter().any(|p| p.iter().zip(&q.point).all(|(a, b)| (a - b).abs() <= 1e-14 * scale)) {
            break;
        }
        points.push(q.point);
        lambda.push(0.0);

        let mut stalled = true;
        for _ in 0..MAX_MINOR {
            let Some(alpha) = affine_minimizer(&points) else { break };
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                lambda = alpha;
                x = combine(&points, &lambda);
                stalled = false;
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= WEIGHT_EPS)
                .map(|(&l, &a)| if l - a > 0.0 { l / (l - a) } else { 0.0 })
                .fold(1.0f64, f64::min)
                .clamp(0.0, 1.0);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > WEIGHT_EPS).collect();
            let mut idx = 0;
            points.retain(|_| {
                idx += 1;
                keep[idx - 1]
            });
            lambda.retain(|&l| l > WEIGHT_EPS);
            if lambda.is_empty() {
                break;
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
            x = combine(&points, &lambda);
        }
        if stalled {
            break;
        }
    }
    Outcome { best, best_value: best_value + f_empty, gap, certified: false, iterations }
}
