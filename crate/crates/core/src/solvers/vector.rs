//! Vector, operator and preconditioner contracts plus the concrete vector
//! types used by the model.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::exchange::{halo_exchange, Rank, RoutingTable};
use crate::fields::{Field, SpaceKind};

/// Common linear algebra contract for solver vectors.
///
/// Elementwise operations cover the owned+annexed prefix so shared-boundary
/// copies stay bitwise consistent with their owners; `dot` folds owned dofs
/// only, through the deterministic ascending-global-id reduction.
pub trait Vector: Clone {
    /// y <- y + alpha x
    fn axpy(&mut self, alpha: f64, x: &Self);
    fn scale(&mut self, alpha: f64);
    fn set_zero(&mut self);
    fn assign(&mut self, other: &Self);
    /// Deterministic global reduction.
    fn dot(&self, other: &Self) -> f64;
    /// Defined as sqrt(dot(self, self)): same reduction path as `dot`.
    fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
    /// Monotone count of deterministic reductions this vector's context has
    /// performed (0 for contexts that do not track them).
    fn reductions_so_far(&self) -> u64 {
        0
    }
}

/// x -> y = Ax between fixed vector shapes. `x` is taken mutably so the
/// operator may refresh its halo bands before reading; owned values are
/// never changed.
pub trait LinearOperator<V: Vector> {
    fn apply(&self, x: &mut V, y: &mut V);
}

/// Approximate solve of P x = b.
pub trait Preconditioner<V: Vector> {
    fn apply(&self, b: &V, x: &mut V);
}

/// P = I: returns b bitwise.
pub struct IdentityPrecond;

impl<V: Vector> Preconditioner<V> for IdentityPrecond {
    fn apply(&self, b: &V, x: &mut V) {
        x.assign(b);
    }
}

/// Shared per-rank solver context: the harness rank handle plus routing
/// tables per function space.
pub struct SolverComm {
    rank: Rank,
    tables: BTreeMap<SpaceKind, Arc<RoutingTable>>,
}

impl SolverComm {
    pub fn new(rank: Rank, tables: BTreeMap<SpaceKind, Arc<RoutingTable>>) -> Arc<SolverComm> {
        Arc::new(SolverComm { rank, tables })
    }

    /// Single-rank context with trivially empty routing.
    pub fn solo(kinds: &[SpaceKind]) -> Arc<SolverComm> {
        let rank = crate::exchange::Harness::solo();
        let tables = kinds
            .iter()
            .map(|&k| (k, Arc::new(RoutingTable::empty(0))))
            .collect();
        Arc::new(SolverComm { rank, tables })
    }

    pub fn rank(&self) -> &Rank {
        &self.rank
    }

    pub fn table(&self, kind: SpaceKind) -> &Arc<RoutingTable> {
        &self.tables[&kind]
    }
}

/// A single field as a solver vector.
#[derive(Clone)]
pub struct SolverField {
    pub field: Field,
    pub comm: Arc<SolverComm>,
}

impl SolverField {
    pub fn new(field: Field, comm: Arc<SolverComm>) -> SolverField {
        SolverField { field, comm }
    }

    /// Refreshes halo bands 1..=depth (plus annexed) from the owners.
    /// Clamped to the routing table's depth, so single-rank layouts with no
    /// halo at all are a no-op.
    pub fn exchange(&mut self, depth: usize) {
        let table = Arc::clone(self.comm.table(self.field.space().kind));
        let depth = depth.min(table.max_depth);
        if depth == 0 {
            return;
        }
        halo_exchange(&mut self.field, depth, &table, self.comm.rank())
            .expect("halo exchange on a well-formed routing table");
    }

    fn active(&self) -> usize {
        self.field.space().last_annexed()
    }

    /// Owned (gid, value) pairs, for reductions and checksums.
    pub fn owned_pairs(&self) -> Vec<(u64, f64)> {
        let space = self.field.space();
        (0..space.last_owned())
            .map(|i| (space.global_id(i), self.field.data()[i]))
            .collect()
    }
}

impl Vector for SolverField {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        let n = self.active();
        let xs = &x.field.data()[..n];
        for (y, &xv) in self.field.data_mut()[..n].iter_mut().zip(xs) {
            *y += alpha * xv;
        }
        self.field.set_dirty();
    }

    fn scale(&mut self, alpha: f64) {
        let n = self.active();
        for y in &mut self.field.data_mut()[..n] {
            *y *= alpha;
        }
        self.field.set_dirty();
    }

    fn set_zero(&mut self) {
        let n = self.active();
        self.field.data_mut()[..n].fill(0.0);
        self.field.set_dirty();
    }

    fn assign(&mut self, other: &Self) {
        let n = self.active();
        self.field.data_mut()[..n].copy_from_slice(&other.field.data()[..n]);
        self.field.set_dirty();
    }

    fn dot(&self, other: &Self) -> f64 {
        let space = self.field.space();
        let pairs: Vec<(u64, f64)> = (0..space.last_owned())
            .map(|i| (space.global_id(i), self.field.data()[i] * other.field.data()[i]))
            .collect();
        self.comm
            .rank()
            .global_sum(&pairs)
            .expect("owned gids are unique per rank")
    }

    fn reductions_so_far(&self) -> u64 {
        self.comm.rank().reduction_count()
    }
}

/// An ordered collection of fields as one solver vector; the dot product is
/// the sum of per-field dots in field order.
#[derive(Clone)]
pub struct FieldVector {
    pub fields: Vec<SolverField>,
}

impl FieldVector {
    pub fn new(fields: Vec<SolverField>) -> FieldVector {
        FieldVector { fields }
    }
}

impl Vector for FieldVector {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (f, xf) in self.fields.iter_mut().zip(&x.fields) {
            f.axpy(alpha, xf);
        }
    }

    fn scale(&mut self, alpha: f64) {
        for f in &mut self.fields {
            f.scale(alpha);
        }
    }

    fn set_zero(&mut self) {
        for f in &mut self.fields {
            f.set_zero();
        }
    }

    fn assign(&mut self, other: &Self) {
        for (f, of) in self.fields.iter_mut().zip(&other.fields) {
            f.assign(of);
        }
    }

    fn dot(&self, other: &Self) -> f64 {
        self.fields
            .iter()
            .zip(&other.fields)
            .map(|(a, b)| a.dot(b))
            .sum()
    }

    fn reductions_so_far(&self) -> u64 {
        self.fields
            .first()
            .map_or(0, |f| f.comm.rank().reduction_count())
    }
}

/// Plain in-memory vector for small dense problems and unit tests; the dot
/// product folds sequentially in index order (deterministic, single rank).
#[derive(Clone)]
pub struct DenseVector {
    pub data: Vec<f64>,
    reductions: Arc<AtomicU64>,
}

impl DenseVector {
    pub fn from(data: Vec<f64>) -> DenseVector {
        DenseVector {
            data,
            reductions: Arc::new(AtomicU64::new(0)),
        }
    }
}

impl Vector for DenseVector {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (y, &xv) in self.data.iter_mut().zip(&x.data) {
            *y += alpha * xv;
        }
    }

    fn scale(&mut self, alpha: f64) {
        self.data.iter_mut().for_each(|y| *y *= alpha);
    }

    fn set_zero(&mut self) {
        self.data.fill(0.0);
    }

    fn assign(&mut self, other: &Self) {
        self.data.copy_from_slice(&other.data);
    }

    fn dot(&self, other: &Self) -> f64 {
        self.reductions.fetch_add(1, Ordering::Relaxed);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    fn reductions_so_far(&self) -> u64 {
        self.reductions.load(Ordering::Relaxed)
    }
}
