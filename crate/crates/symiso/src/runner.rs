//! Multi-threaded experiment drivers.
//!
//! Instances are sharded by index across scoped threads and their verdicts
//! are recorded in enumeration order, so the report does not depend on the
//! thread count.

use std::thread;
use std::time::Instant;

use symiso_core::placement::candidate_isometries;
use symiso_core::verify::{self, instance_verdict, record_verdict, Verdict};
use symiso_core::{ExperimentReport, GroupCase, QuadNorm, SymmetricGraph, VerifyError};

/// Verdicts of `instances`, in order, computed on `threads` workers.
pub fn verdicts(
    instances: &[SymmetricGraph],
    norm: &QuadNorm,
    threads: usize,
) -> Result<Vec<Verdict>, VerifyError> {
    let threads = threads.clamp(1, instances.len().max(1));
    let mut slots: Vec<Option<Result<Verdict, VerifyError>>> = vec![None; instances.len()];
    thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    (t..instances.len())
                        .step_by(threads)
                        .map(|i| (i, instance_verdict(&instances[i], norm)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect()
}

/// The equivalence experiment on `threads` workers.
pub fn equivalence(
    n_max: usize,
    case: GroupCase,
    norm: &QuadNorm,
    threads: usize,
) -> Result<ExperimentReport, VerifyError> {
    let start = Instant::now();
    candidate_isometries(norm, case)?;
    let instances = verify::enumerate_all(n_max, case)?;
    let mut report = ExperimentReport::new(format!("equivalence {} n<={n_max}", case.name()));
    for (sg, v) in instances.iter().zip(verdicts(&instances, norm, threads)?) {
        record_verdict(&mut report, sg, &v);
    }
    report.seconds = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Runs a single-threaded experiment and stamps its running time.
pub fn timed(
    f: impl FnOnce() -> Result<ExperimentReport, VerifyError>,
) -> Result<ExperimentReport, VerifyError> {
    let start = Instant::now();
    let mut r = f()?;
    r.seconds = Some(start.elapsed().as_secs_f64());
    Ok(r)
}

pub fn default_threads() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}
