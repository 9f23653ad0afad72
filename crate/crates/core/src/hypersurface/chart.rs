//! Spherical charts with analytic first derivatives, and the generalized
//! cross product of `n − 1` tangent vectors.

use crate::calculus::{Real, SVec};

/// Up to three tangent vectors of a hypersurface in `R^{≤4}`.
pub type Tangents<T> = [SVec<T>; 3];

/// Unit-sphere chart point `p(u)` and its partials `∂p/∂u_a`.
pub fn sphere_chart_jet<T: Real>(n: usize, u: &SVec<T>) -> (SVec<T>, Tangents<T>) {
    let z = SVec::zeros(n);
    let mut tangents = [z, z, z];
    let p = match n {
        2 => {
            let (s, c) = (u[0].sin(), u[0].cos());
            tangents[0] = SVec::from_slice(&[-s, c]);
            SVec::from_slice(&[c, s])
        }
        3 => {
            let (st, ct) = (u[0].sin(), u[0].cos());
            let (sp, cp) = (u[1].sin(), u[1].cos());
            tangents[0] = SVec::from_slice(&[ct * cp, ct * sp, -st]);
            tangents[1] = SVec::from_slice(&[-(st * sp), st * cp, T::zero()]);
            SVec::from_slice(&[st * cp, st * sp, ct])
        }
        _ => {
            let (sc, cc) = (u[0].sin(), u[0].cos());
            let (st, ct) = (u[1].sin(), u[1].cos());
            let (sp, cp) = (u[2].sin(), u[2].cos());
            tangents[0] = SVec::from_slice(&[cc * st * cp, cc * st * sp, cc * ct, -sc]);
            tangents[1] = SVec::from_slice(&[sc * ct * cp, sc * ct * sp, -(sc * st), T::zero()]);
            tangents[2] = SVec::from_slice(&[-(sc * st * sp), sc * st * cp, T::zero(), T::zero()]);
            SVec::from_slice(&[sc * st * cp, sc * st * sp, sc * ct, cc])
        }
    };
    (p, tangents)
}

fn det_small<T: Real>(m: &[[T; 3]; 3], k: usize) -> T {
    match k {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
    }
}

/// `N` with `det(N, t_1, …, t_{n−1}) = |N|²`: `N_i = (−1)^i det(T without row i)`.
/// `|N|` is the Euclidean area element spanned by the tangents.
pub fn generalized_cross<T: Real>(n: usize, t: &Tangents<T>) -> SVec<T> {
    let k = n - 1;
    SVec::from_fn(n, |i| {
        let mut m = [[T::zero(); 3]; 3];
        let mut r = 0;
        for row in 0..n {
            if row == i {
                continue;
            }
            for (a, col) in m[r].iter_mut().enumerate().take(k) {
                *col = t[a][row];
            }
            r += 1;
        }
        let d = det_small(&m, k);
        if i % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

/// Sign of `det(p, ∂p)` for the unit-sphere chart, i.e. whether the
/// generalized cross product of the chart tangents points outward.
pub fn chart_orientation(n: usize) -> f64 {
    let u = SVec::from_fn(n - 1, |a| 0.7 + 0.1 * a as f64);
    let (p, t) = sphere_chart_jet::<f64>(n, &u);
    generalized_cross(n, &t).dot(&p).signum()
}
