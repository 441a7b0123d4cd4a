//! In-process multi-rank harness: mailboxes, collectives, rank drivers.

use std::collections::VecDeque;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, Condvar, Mutex, MutexGuard};

use crate::fields::Field;

use super::{ExchangeError, RoutingTable};

/// How `run_ranks` drives the rank procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    /// One OS thread per rank, genuinely concurrent.
    Threads,
    /// Deterministic cooperative interleave: exactly one rank runs at a
    /// time, handing over whenever it blocks. Detects deadlock exactly
    /// (quiescence: nobody runnable, nobody done-with-everything).
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Running,
    Runnable,
    Blocked,
    Done,
}

struct State {
    mailboxes: Vec<Vec<VecDeque<Vec<f64>>>>,
    status: Vec<Status>,
    current: usize,
    error: Option<ExchangeError>,
    // Reduction scratch, one in-flight reduction at a time.
    red_contribs: Vec<Option<Vec<(u64, f64)>>>,
    red_arrived: usize,
    red_ready: bool,
    red_remaining: usize,
    red_result: Option<Result<f64, u64>>,
    reductions: Vec<u64>,
}

struct Shared {
    nranks: usize,
    mode: ExecMode,
    state: Mutex<State>,
    cond: Condvar,
}

/// The per-rank mailbox fabric plus reduction scratch.
pub struct Harness {
    shared: Arc<Shared>,
}

impl Harness {
    pub fn new(nranks: usize, mode: ExecMode) -> Harness {
        assert!(nranks >= 1);
        let state = State {
            mailboxes: (0..nranks)
                .map(|_| (0..nranks).map(|_| VecDeque::new()).collect())
                .collect(),
            status: vec![Status::Runnable; nranks],
            current: 0,
            error: None,
            red_contribs: vec![None; nranks],
            red_arrived: 0,
            red_ready: false,
            red_remaining: 0,
            red_result: None,
            reductions: vec![0; nranks],
        };
        Harness {
            shared: Arc::new(Shared {
                nranks,
                mode,
                state: Mutex::new(state),
                cond: Condvar::new(),
            }),
        }
    }

    /// Convenience single-rank handle (no `run_ranks` needed): reductions
    /// still go through the canonical sorted fold.
    pub fn solo() -> Rank {
        let h = Harness::new(1, ExecMode::Threads);
        h.rank_handle(0)
    }

    pub fn nranks(&self) -> usize {
        self.shared.nranks
    }

    fn rank_handle(&self, rank: usize) -> Rank {
        Rank {
            rank,
            shared: Arc::clone(&self.shared),
        }
    }
}

/// One rank's handle onto the harness: the only cross-rank channel.
pub struct Rank {
    pub rank: usize,
    shared: Arc<Shared>,
}

impl Rank {
    pub fn nranks(&self) -> usize {
        self.shared.nranks
    }

    /// Deterministic global reductions performed by this rank so far.
    pub fn reduction_count(&self) -> u64 {
        let st = self.shared.state.lock().unwrap();
        st.reductions[self.rank]
    }

    fn fail(st: &State) -> Option<ExchangeError> {
        st.error.clone()
    }

    /// Picks the next runnable rank after `from`; flags deadlock when ranks
    /// are blocked but nothing can run.
    fn advance(shared: &Shared, st: &mut State, from: usize) -> Result<(), ExchangeError> {
        let n = shared.nranks;
        for i in 1..=n {
            let r = (from + i) % n;
            if st.status[r] == Status::Runnable {
                st.current = r;
                return Ok(());
            }
        }
        if st.status.iter().any(|&s| s == Status::Blocked) {
            st.error = Some(ExchangeError::Deadlock);
            shared.cond.notify_all();
            return Err(ExchangeError::Deadlock);
        }
        Ok(())
    }

    /// Blocks until this rank may run again (mode-dependent).
    fn wait_turn<'a>(
        &self,
        mut st: MutexGuard<'a, State>,
    ) -> Result<MutexGuard<'a, State>, ExchangeError> {
        match self.shared.mode {
            ExecMode::Threads => {
                st = self.shared.cond.wait(st).unwrap();
                match Self::fail(&st) {
                    Some(e) => Err(e),
                    None => Ok(st),
                }
            }
            ExecMode::Sequential => {
                st.status[self.rank] = Status::Blocked;
                Self::advance(&self.shared, &mut st, self.rank)?;
                self.shared.cond.notify_all();
                loop {
                    if let Some(e) = Self::fail(&st) {
                        return Err(e);
                    }
                    if st.current == self.rank && st.status[self.rank] == Status::Runnable {
                        st.status[self.rank] = Status::Running;
                        return Ok(st);
                    }
                    st = self.shared.cond.wait(st).unwrap();
                }
            }
        }
    }

    /// Waits for the scheduler token before first running (sequential mode).
    fn start_gate(&self) -> Result<(), ExchangeError> {
        if self.shared.mode != ExecMode::Sequential {
            let mut st = self.shared.state.lock().unwrap();
            st.status[self.rank] = Status::Running;
            return Ok(());
        }
        let mut st = self.shared.state.lock().unwrap();
        loop {
            if let Some(e) = Self::fail(&st) {
                return Err(e);
            }
            if st.current == self.rank && st.status[self.rank] == Status::Runnable {
                st.status[self.rank] = Status::Running;
                return Ok(());
            }
            st = self.shared.cond.wait(st).unwrap();
        }
    }

    fn finish(&self) {
        let mut st = self.shared.state.lock().unwrap();
        st.status[self.rank] = Status::Done;
        if self.shared.mode == ExecMode::Sequential {
            let _ = Self::advance(&self.shared, &mut st, self.rank);
        }
        self.shared.cond.notify_all();
    }

    /// Sends a message to `to`; never blocks, preserves per-sender order.
    pub fn send(&self, to: usize, msg: Vec<f64>) {
        let mut st = self.shared.state.lock().unwrap();
        st.mailboxes[self.rank][to].push_back(msg);
        if st.status[to] == Status::Blocked {
            st.status[to] = Status::Runnable;
        }
        self.shared.cond.notify_all();
    }

    /// Receives the next message from `from`, blocking until one arrives.
    pub fn recv(&self, from: usize) -> Result<Vec<f64>, ExchangeError> {
        let mut st = self.shared.state.lock().unwrap();
        loop {
            if let Some(e) = Self::fail(&st) {
                return Err(e);
            }
            if let Some(msg) = st.mailboxes[from][self.rank].pop_front() {
                return Ok(msg);
            }
            st = self.wait_turn(st)?;
        }
    }

    /// Collective deterministic reduction: concatenates every rank's
    /// (global dof id, value) contributions, sorts by id and folds the sum
    /// in ascending id order. Bitwise identical for any rank count and any
    /// partitioning of the same global data.
    pub fn global_sum(&self, pairs: &[(u64, f64)]) -> Result<f64, ExchangeError> {
        let n = self.shared.nranks;
        let mut st = self.shared.state.lock().unwrap();
        // Deposit once the previous reduction is fully drained.
        loop {
            if let Some(e) = Self::fail(&st) {
                return Err(e);
            }
            if !st.red_ready && st.red_contribs[self.rank].is_none() {
                st.red_contribs[self.rank] = Some(pairs.to_vec());
                st.red_arrived += 1;
                break;
            }
            st = self.wait_turn(st)?;
        }
        if st.red_arrived == n {
            let mut all: Vec<(u64, f64)> = Vec::new();
            for c in st.red_contribs.iter_mut() {
                all.append(c.as_mut().unwrap());
                *c = None;
            }
            all.sort_unstable_by_key(|&(gid, _)| gid);
            let mut result: Result<f64, u64> = Ok(0.0);
            let mut sum = 0.0;
            for w in 0..all.len() {
                if w > 0 && all[w].0 == all[w - 1].0 {
                    result = Err(all[w].0);
                    break;
                }
                sum += all[w].1;
            }
            if result.is_ok() {
                result = Ok(sum);
            }
            st.red_result = Some(result);
            st.red_ready = true;
            st.red_arrived = 0;
            st.red_remaining = n;
            self.shared.cond.notify_all();
        }
        // Collect this reduction's result.
        loop {
            if let Some(e) = Self::fail(&st) {
                return Err(e);
            }
            if st.red_ready {
                let result = st.red_result.clone().unwrap();
                st.red_remaining -= 1;
                if st.red_remaining == 0 {
                    st.red_ready = false;
                    st.red_result = None;
                    self.shared.cond.notify_all();
                }
                st.reductions[self.rank] += 1;
                return result.map_err(ExchangeError::DuplicateContribution);
            }
            st = self.wait_turn(st)?;
        }
    }
}

/// Fills `field`'s halo (annexed + bands 1..=depth) with bitwise copies of
/// the owners' values and raises its clean depth. One message per peer per
/// exchange, peers visited in ascending rank order.
pub fn halo_exchange(
    field: &mut Field,
    depth: usize,
    table: &RoutingTable,
    rank: &Rank,
) -> Result<(), ExchangeError> {
    if depth > table.max_depth {
        return Err(ExchangeError::DepthOutOfRange {
            depth,
            max: table.max_depth,
        });
    }
    for peer in table.peers() {
        let mut payload = Vec::new();
        for d in 0..depth {
            payload.extend(peer.send[d].iter().map(|&(_, idx)| field.data()[idx]));
        }
        if !payload.is_empty() {
            rank.send(peer.rank, payload);
        }
    }
    for peer in table.peers() {
        let expect: usize = peer.recv[..depth].iter().map(Vec::len).sum();
        if expect == 0 {
            continue;
        }
        let msg = rank.recv(peer.rank)?;
        debug_assert_eq!(msg.len(), expect);
        let mut at = 0;
        let data = field.data_mut();
        for d in 0..depth {
            for &(_, idx) in &peer.recv[d] {
                data[idx] = msg[at];
                at += 1;
            }
        }
    }
    field
        .set_clean(depth)
        .expect("routing depth bounded by the partition depth");
    Ok(())
}

/// Runs `nranks` copies of `body` to completion over a fresh harness,
/// returning the per-rank results in rank order.
pub fn run_ranks<T, F>(nranks: usize, mode: ExecMode, body: F) -> Result<Vec<T>, ExchangeError>
where
    T: Send,
    F: Fn(Rank) -> T + Sync,
{
    let harness = Harness::new(nranks, mode);
    let mut slots: Vec<Option<Result<T, String>>> = (0..nranks).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (rank, slot) in slots.iter_mut().enumerate() {
            let handle = harness.rank_handle(rank);
            let body = &body;
            handles.push(scope.spawn(move || {
                let out = match handle.start_gate() {
                    Ok(()) => catch_unwind(AssertUnwindSafe(|| body(Rank {
                        rank: handle.rank,
                        shared: Arc::clone(&handle.shared),
                    })))
                    .map_err(|p| panic_message(&p)),
                    Err(e) => Err(format!("{e}")),
                };
                handle.finish();
                *slot = Some(out);
            }));
        }
        for h in handles {
            // A panicking rank records its message in the slot; join errors
            // only happen if the slot write itself was skipped.
            let _ = h.join();
        }
    });
    if let Some(e) = harness.shared.state.lock().unwrap().error.clone() {
        return Err(e);
    }
    let mut out = Vec::with_capacity(nranks);
    for (rank, slot) in slots.into_iter().enumerate() {
        match slot {
            Some(Ok(v)) => out.push(v),
            Some(Err(message)) => return Err(ExchangeError::RankPanic { rank, message }),
            None => {
                return Err(ExchangeError::RankPanic {
                    rank,
                    message: "rank produced no result".into(),
                })
            }
        }
    }
    Ok(out)
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rank_runs() {
        let out = run_ranks(1, ExecMode::Threads, |r| r.rank * 10).unwrap();
        assert_eq!(out, vec![0]);
    }

    #[test]
    fn ping_pong_preserves_order() {
        for mode in [ExecMode::Threads, ExecMode::Sequential] {
            let out = run_ranks(2, mode, |r| {
                if r.rank == 0 {
                    r.send(1, vec![1.0]);
                    r.send(1, vec![2.0]);
                    r.send(1, vec![3.0]);
                    r.recv(1).unwrap()
                } else {
                    let a = r.recv(0).unwrap();
                    let b = r.recv(0).unwrap();
                    let c = r.recv(0).unwrap();
                    r.send(0, vec![a[0] * 100.0 + b[0] * 10.0 + c[0]]);
                    vec![0.0]
                }
            })
            .unwrap();
            assert_eq!(out[0], vec![123.0], "{mode:?}");
        }
    }

    #[test]
    fn global_sum_trivial_cases() {
        let solo = Harness::solo();
        assert_eq!(solo.global_sum(&[(0, 0.0), (1, 0.0)]).unwrap(), 0.0);
        let pairs: Vec<(u64, f64)> = (0..10).map(|i| (i, i as f64)).collect();
        assert_eq!(solo.global_sum(&pairs).unwrap(), 45.0);
    }

    #[test]
    fn global_sum_is_partition_invariant_bitwise() {
        // Awkward values whose sum depends on the fold order.
        let values: Vec<f64> = (0..64)
            .map(|i| (1.0 + i as f64).sqrt() * 1e10_f64.powf((i % 7) as f64 / 7.0))
            .collect();
        let serial = {
            let solo = Harness::solo();
            let pairs: Vec<(u64, f64)> = values.iter().enumerate().map(|(i, &v)| (i as u64, v)).collect();
            solo.global_sum(&pairs).unwrap()
        };
        for nranks in [2usize, 4] {
            let values = values.clone();
            let out = run_ranks(nranks, ExecMode::Threads, move |r| {
                // Strided partitioning: different per-rank contribution sets.
                let pairs: Vec<(u64, f64)> = values
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i % nranks == r.rank)
                    .map(|(i, &v)| (i as u64, v))
                    .collect();
                r.global_sum(&pairs).unwrap()
            })
            .unwrap();
            for v in out {
                assert_eq!(v.to_bits(), serial.to_bits(), "nranks={nranks}");
            }
        }
    }

    #[test]
    fn global_sum_rejects_duplicate_ids() {
        let err = run_ranks(2, ExecMode::Threads, |r| {
            r.global_sum(&[(5, 1.0)]).map(|_| ())
        })
        .unwrap();
        assert!(matches!(
            err[0],
            Err(ExchangeError::DuplicateContribution(5))
        ));
    }

    #[test]
    fn sequential_mode_detects_deadlock() {
        let result = run_ranks(2, ExecMode::Sequential, |r| {
            // Both ranks receive first: classic deadlock.
            r.recv(1 - r.rank).map(|_| ())
        });
        assert!(matches!(result, Err(ExchangeError::Deadlock)));
    }

    #[test]
    fn reduction_count_increments() {
        let solo = Harness::solo();
        assert_eq!(solo.reduction_count(), 0);
        solo.global_sum(&[(0, 1.0)]).unwrap();
        solo.global_sum(&[(0, 1.0)]).unwrap();
        assert_eq!(solo.reduction_count(), 2);
    }
}
