//! Timing of the decision procedure on the scaling families.

use std::time::Instant;

use crate::analysis::normalize;
use crate::automaton::thompson_automaton;
use crate::equivalence::bisim_check;
use crate::error::Result;
use crate::gen::{nested_family, seq_family};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Seq,
    Nested,
}

/// Nanosecond timings for one size; each phase covers both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRow {
    pub size: usize,
    pub build_ns: u128,
    pub normalize_ns: u128,
    pub decide_ns: u128,
}

impl BenchRow {
    pub fn total_ns(&self) -> u128 {
        self.build_ns + self.normalize_ns + self.decide_ns
    }

    pub const CSV_HEADER: &'static str = "size,build_ns,normalize_ns,decide_ns";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.size, self.build_ns, self.normalize_ns, self.decide_ns
        )
    }
}

/// Runs the full pipeline `reps` times and keeps the fastest run. Deep inputs
/// recurse, so call this from a thread with a large stack (see [`on_big_stack`]).
pub fn measure(family: Family, n: usize, reps: usize) -> Result<BenchRow> {
    let (header, e, f) = match family {
        Family::Seq => seq_family(n),
        Family::Nested => nested_family(n),
    };
    let ctx = header.tests();
    let mut best: Option<BenchRow> = None;
    for _ in 0..reps.max(1) {
        let t0 = Instant::now();
        let x = thompson_automaton(ctx, &e)?;
        let y = thompson_automaton(ctx, &f)?;
        let t1 = Instant::now();
        let (x, y) = (normalize(&x), normalize(&y));
        let t2 = Instant::now();
        let verdict = bisim_check(&x, &y);
        let t3 = Instant::now();
        assert!(
            verdict.is_equivalent(),
            "benchmark pairs are equivalent by construction"
        );
        let row = BenchRow {
            size: n,
            build_ns: (t1 - t0).as_nanos(),
            normalize_ns: (t2 - t1).as_nanos(),
            decide_ns: (t3 - t2).as_nanos(),
        };
        if best.is_none_or(|b| row.total_ns() < b.total_ns()) {
            best = Some(row);
        }
    }
    Ok(best.expect("at least one repetition"))
}

/// Runs `f` on a fresh thread with a 1 GiB stack and returns its result.
pub fn on_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(f)
        .expect("spawn worker thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}
