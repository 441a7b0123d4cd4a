//! Krylov methods: preconditioned CG, restarted FGMRES and BiCGStab.
//!
//! One implementation each, generic over the vector/operator/preconditioner
//! traits. Stopping tests the recurrence residual against `tol * ||b||`;
//! on exit the true residual is recomputed from scratch for the report (and
//! re-checked before declaring convergence, so `converged` is honest).

use super::report::SolverReport;
use super::vector::{LinearOperator, Preconditioner, Vector};

fn true_residual<V: Vector>(a: &impl LinearOperator<V>, b: &V, x: &V, scratch: &mut V) -> f64 {
    let mut xc = x.clone();
    a.apply(&mut xc, scratch);
    scratch.scale(-1.0);
    scratch.axpy(1.0, b);
    scratch.norm()
}

/// Conjugate gradients for symmetric positive definite `a` (caller's
/// responsibility). Returns `x0` unchanged when it already converges.
pub fn cg<V, A, P>(a: &A, p: &P, b: &V, x0: &V, tol: f64, maxit: usize) -> (V, SolverReport)
where
    V: Vector,
    A: LinearOperator<V>,
    P: Preconditioner<V>,
{
    let mut report = SolverReport::new();
    let red0 = b.reductions_so_far();
    let mut x = x0.clone();
    let bnorm = b.norm();
    let denom = if bnorm > 0.0 { bnorm } else { 1.0 };

    let mut q = b.clone();
    let mut r = b.clone();
    {
        let mut xc = x.clone();
        a.apply(&mut xc, &mut q);
        r.axpy(-1.0, &q);
    }
    let mut rnorm = r.norm();
    if rnorm / denom <= tol {
        report.converged = true;
        report.final_residual = rnorm / denom;
        report.reduction_count = b.reductions_so_far() - red0;
        return (x, report);
    }

    let mut z = b.clone();
    p.apply(&r, &mut z);
    let mut rz = r.dot(&z);
    let mut dir = z.clone();

    while report.iterations < maxit {
        let mut d = dir.clone();
        a.apply(&mut d, &mut q);
        let pq = dir.dot(&q);
        if pq <= 0.0 || rz == 0.0 {
            report.breakdown = true;
            break;
        }
        let alpha = rz / pq;
        x.axpy(alpha, &dir);
        r.axpy(-alpha, &q);
        rnorm = r.norm();
        report.iterations += 1;
        report.residual_history.push(rnorm / denom);
        if rnorm / denom <= tol {
            let tr = true_residual(a, b, &x, &mut q) / denom;
            if tr <= tol {
                report.converged = true;
                report.final_residual = tr;
                report.reduction_count = b.reductions_so_far() - red0;
                return (x, report);
            }
        }
        p.apply(&r, &mut z);
        let rz_new = r.dot(&z);
        let beta = rz_new / rz;
        rz = rz_new;
        dir.scale(beta);
        dir.axpy(1.0, &z);
    }

    report.final_residual = true_residual(a, b, &x, &mut q) / denom;
    report.converged = report.final_residual <= tol;
    report.reduction_count = b.reductions_so_far() - red0;
    (x, report)
}

/// Flexible right-preconditioned GMRES with restart. Flexibility (storing
/// the preconditioned directions) tolerates preconditioners that are not a
/// fixed linear map, like a multigrid cycle with an inner iterative coarse
/// solve.
pub fn gmres<V, A, P>(
    a: &A,
    p: &P,
    b: &V,
    x0: &V,
    tol: f64,
    maxit: usize,
    restart: usize,
) -> (V, SolverReport)
where
    V: Vector,
    A: LinearOperator<V>,
    P: Preconditioner<V>,
{
    let mut report = SolverReport::new();
    let red0 = b.reductions_so_far();
    let m = restart.max(1);
    let mut x = x0.clone();
    let bnorm = b.norm();
    let denom = if bnorm > 0.0 { bnorm } else { 1.0 };
    let mut scratch = b.clone();

    'outer: while report.iterations < maxit {
        // Fresh true residual at each cycle start.
        let mut r = b.clone();
        {
            let mut xc = x.clone();
            a.apply(&mut xc, &mut scratch);
            r.axpy(-1.0, &scratch);
        }
        let beta = r.norm();
        if beta / denom <= tol {
            report.converged = true;
            break;
        }
        let mut basis: Vec<V> = Vec::with_capacity(m + 1);
        let mut dirs: Vec<V> = Vec::with_capacity(m);
        r.scale(1.0 / beta);
        basis.push(r);
        // Hessenberg column storage plus Givens rotations.
        let mut h = vec![vec![0.0f64; m]; m + 1];
        let mut cs = vec![0.0f64; m];
        let mut sn = vec![0.0f64; m];
        let mut g = vec![0.0f64; m + 1];
        g[0] = beta;
        let mut cols = 0usize;

        for j in 0..m {
            let mut z = b.clone();
            p.apply(&basis[j], &mut z);
            let mut w = b.clone();
            {
                let mut zc = z.clone();
                a.apply(&mut zc, &mut w);
            }
            dirs.push(z);
            for (i, v) in basis.iter().enumerate() {
                h[i][j] = w.dot(v);
                w.axpy(-h[i][j], v);
            }
            let hnext = w.norm();
            h[j + 1][j] = hnext;
            // Apply previous rotations to the new column.
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let rho = (h[j][j] * h[j][j] + h[j + 1][j] * h[j + 1][j]).sqrt();
            if rho == 0.0 {
                report.breakdown = true;
                cols = j;
                break;
            }
            cs[j] = h[j][j] / rho;
            sn[j] = h[j + 1][j] / rho;
            h[j][j] = rho;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            cols = j + 1;
            report.iterations += 1;
            report.residual_history.push(g[j + 1].abs() / denom);

            let happy = hnext == 0.0;
            if g[j + 1].abs() / denom <= tol || report.iterations >= maxit || happy {
                // Solve the least-squares system and update x.
                let mut y = vec![0.0f64; cols];
                for i in (0..cols).rev() {
                    let mut s = g[i];
                    for k in i + 1..cols {
                        s -= h[i][k] * y[k];
                    }
                    y[i] = s / h[i][i];
                }
                for (yi, zi) in y.iter().zip(&dirs) {
                    x.axpy(*yi, zi);
                }
                if g[cols].abs() / denom <= tol || happy {
                    let tr = true_residual(a, b, &x, &mut scratch) / denom;
                    if tr <= tol {
                        report.converged = true;
                        break 'outer;
                    }
                }
                if report.iterations >= maxit {
                    break 'outer;
                }
                continue 'outer;
            }
            let v_next = {
                let mut v = w;
                v.scale(1.0 / hnext);
                v
            };
            basis.push(v_next);
        }
        if report.breakdown {
            // Solve with what we have and stop.
            let mut y = vec![0.0f64; cols];
            for i in (0..cols).rev() {
                let mut s = g[i];
                for k in i + 1..cols {
                    s -= h[i][k] * y[k];
                }
                if h[i][i] != 0.0 {
                    y[i] = s / h[i][i];
                }
            }
            for (yi, zi) in y.iter().zip(&dirs) {
                x.axpy(*yi, zi);
            }
            break;
        }
    }

    report.final_residual = true_residual(a, b, &x, &mut scratch) / denom;
    report.converged = report.final_residual <= tol;
    report.reduction_count = b.reductions_so_far() - red0;
    (x, report)
}

/// Right-preconditioned BiCGStab.
///
/// The loop performs exactly five deterministic reductions per full
/// iteration: (r0, r), (r0, v), (t, s), (t, t) and the residual norm. There
/// is deliberately no early-exit norm check on the half-step residual, which
/// would make the count six.
pub fn bicgstab<V, A, P>(a: &A, p: &P, b: &V, x0: &V, tol: f64, maxit: usize) -> (V, SolverReport)
where
    V: Vector,
    A: LinearOperator<V>,
    P: Preconditioner<V>,
{
    let mut report = SolverReport::new();
    let red0 = b.reductions_so_far();
    let mut x = x0.clone();
    let bnorm = b.norm();
    let denom = if bnorm > 0.0 { bnorm } else { 1.0 };
    let mut scratch = b.clone();

    let mut r = b.clone();
    {
        let mut xc = x.clone();
        a.apply(&mut xc, &mut scratch);
        r.axpy(-1.0, &scratch);
    }
    let rnorm = r.norm();
    if rnorm / denom <= tol {
        report.converged = true;
        report.final_residual = rnorm / denom;
        report.reduction_count = b.reductions_so_far() - red0;
        return (x, report);
    }
    let r0 = r.clone();
    let mut rho = 1.0f64;
    let mut alpha = 1.0f64;
    let mut omega = 1.0f64;
    let mut v = b.clone();
    v.set_zero();
    let mut dir = v.clone();

    while report.iterations < maxit {
        let rho_new = r0.dot(&r); // reduction 1
        if rho_new == 0.0 {
            report.breakdown = true;
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        // dir = r + beta (dir - omega v)
        dir.axpy(-omega, &v);
        dir.scale(beta);
        dir.axpy(1.0, &r);

        let mut phat = b.clone();
        p.apply(&dir, &mut phat);
        {
            let mut pc = phat.clone();
            a.apply(&mut pc, &mut v);
        }
        let r0v = r0.dot(&v); // reduction 2
        if r0v == 0.0 {
            report.breakdown = true;
            break;
        }
        alpha = rho / r0v;
        let mut s = r.clone();
        s.axpy(-alpha, &v);

        let mut shat = b.clone();
        p.apply(&s, &mut shat);
        let mut t = b.clone();
        {
            let mut sc = shat.clone();
            a.apply(&mut sc, &mut t);
        }
        let ts = t.dot(&s); // reduction 3
        let tt = t.dot(&t); // reduction 4
        omega = if tt > 0.0 { ts / tt } else { 0.0 };

        x.axpy(alpha, &phat);
        x.axpy(omega, &shat);
        r.assign(&s);
        r.axpy(-omega, &t);

        let rnorm = r.norm(); // reduction 5
        report.iterations += 1;
        report.residual_history.push(rnorm / denom);
        if rnorm / denom <= tol {
            let tr = true_residual(a, b, &x, &mut scratch) / denom;
            if tr <= tol {
                report.converged = true;
                report.final_residual = tr;
                report.reduction_count = b.reductions_so_far() - red0;
                return (x, report);
            }
        }
        if omega == 0.0 {
            report.breakdown = true;
            break;
        }
    }

    report.final_residual = true_residual(a, b, &x, &mut scratch) / denom;
    report.converged = report.final_residual <= tol;
    report.reduction_count = b.reductions_so_far() - red0;
    (x, report)
}
