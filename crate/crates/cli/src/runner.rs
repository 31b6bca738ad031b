//! Task execution: resolve a task's named objects, call the kernel, and
//! shape the outcome into a JSON report (serde_json maps are sorted, so
//! identical inputs print byte-identical reports) or CSV for tables.

use brmult_core::icmod::{
    contracted_numerical_test, is_integrally_closed_monomial, mixed_mult_ideals,
    monomial_closure, verify_brpolya, verify_jrn0, verify_local_identity,
    verify_prodlength, verify_step1, minors_multiplicativity_check,
};
use brmult_core::jointred::{
    freeness_and_minimality_check, joint_reduction_number, verify_determinantal,
    JointReduction, Jrn,
};
use brmult_core::koszul::verify_comparison;
use brmult_core::submod::Submodule;
use brmult_core::symprod::{br_table, degree_check, mixed_br, mu_table};
use brmult_core::{Bounds, Error};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::instance::{parse_instance, Instance, Task};

/// Flags shared by every run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub field: Option<brmult_core::scalar::FieldSpec>,
    pub s_max: Option<usize>,
    pub n_max: Option<usize>,
    pub window: Option<Vec<usize>>,
    pub trials: usize,
    pub jobs: usize,
    pub csv: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            field: None,
            s_max: None,
            n_max: None,
            window: None,
            trials: 8,
            jobs: 1,
            csv: false,
        }
    }
}

impl RunConfig {
    fn bounds(&self) -> Bounds {
        Bounds {
            s_max: self.s_max.unwrap_or(brmult_core::DEFAULT_S_MAX),
            n_max: self.n_max.unwrap_or(brmult_core::DEFAULT_N_MAX),
            gen_cap: brmult_core::DEFAULT_GEN_CAP,
        }
    }
}

/// Per-task verdict, driving the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskStatus {
    /// Computed, and any verification it carries passed.
    Pass,
    /// A verified identity came out false.
    Fail,
    /// A certificate or sweep bound was hit; raise --s-max/--n-max/--window.
    Indeterminate,
    /// The task's preconditions don't fit the instance.
    InputError,
}

#[derive(Clone, Debug)]
pub struct TaskReport {
    /// JSON object (one line) or, for --csv table tasks, a CSV block.
    pub text: String,
    pub status: TaskStatus,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub reports: Vec<TaskReport>,
    pub exit_code: i32,
}

/// Top-level entry: parse, select the tasks matching `command` (`run`
/// selects everything), execute, and fold the exit code.  `Err` carries an
/// input-error message (exit 2).
pub fn run_text(text: &str, command: &str, cfg: &RunConfig) -> Result<RunOutcome, String> {
    let instance = parse_instance(text, cfg.field).map_err(|d| d.to_string())?;
    let selected: Vec<&Task> = if command == "run" {
        instance.tasks.iter().collect()
    } else {
        if !crate::COMMANDS.contains(&command) {
            return Err(format!("unknown command `{command}`"));
        }
        instance.tasks.iter().filter(|t| t.command == command).collect()
    };
    if selected.is_empty() {
        return Err(match command {
            "run" => "instance file contains no tasks".to_string(),
            _ => format!("instance file contains no `{command}` task"),
        });
    }
    if cfg.csv && selected.iter().any(|t| t.command != "brtable") {
        return Err("--csv is only available for brtable tasks".to_string());
    }

    let reports: Vec<TaskReport> = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| {
            selected
                .par_iter()
                .map(|t| execute_task(&instance, t, cfg))
                .collect()
        })
    } else {
        selected.iter().map(|t| execute_task(&instance, t, cfg)).collect()
    };

    let exit_code = if reports.iter().any(|r| r.status == TaskStatus::InputError) {
        2
    } else if reports.iter().any(|r| r.status == TaskStatus::Fail) {
        1
    } else if reports.iter().any(|r| r.status == TaskStatus::Indeterminate) {
        3
    } else {
        0
    };
    Ok(RunOutcome { reports, exit_code })
}

fn report(value: Value, status: TaskStatus) -> TaskReport {
    TaskReport { text: value.to_string(), status }
}

fn pass_fail(equal: bool) -> TaskStatus {
    if equal {
        TaskStatus::Pass
    } else {
        TaskStatus::Fail
    }
}

/// Map a kernel error to a report: bound exhaustion is indeterminate (exit
/// 3, raisable), everything else is an input problem (exit 2).
fn error_report(task: &Task, err: Error) -> TaskReport {
    let status = match err {
        Error::NotFiniteColength { .. }
        | Error::WindowTooSmall { .. }
        | Error::GeneratorCapExceeded { .. }
        | Error::CandidateNotJointReduction { .. } => TaskStatus::Indeterminate,
        Error::NotLocal | Error::WrongGeneratorCount { .. } | Error::Mismatch(_) => {
            TaskStatus::InputError
        }
    };
    report(
        json!({
            "task": task.command,
            "instance": task.args.join(", "),
            "error": err.to_string(),
            "indeterminate": status == TaskStatus::Indeterminate,
        }),
        status,
    )
}

fn input_error(task: &Task, message: impl Into<String>) -> TaskReport {
    report(
        json!({
            "task": task.command,
            "instance": task.args.join(", "),
            "error": message.into(),
        }),
        TaskStatus::InputError,
    )
}

struct Ctx<'a> {
    inst: &'a Instance,
    task: &'a Task,
    cfg: &'a RunConfig,
    bounds: Bounds,
}

impl<'a> Ctx<'a> {
    fn modules(&self) -> Result<Vec<Submodule>, String> {
        self.task.args.iter().map(|a| self.inst.module(a)).collect()
    }

    fn arity(&self, lo: usize, hi: usize) -> Result<(), String> {
        let n = self.task.args.len();
        if n < lo || n > hi {
            return Err(if lo == hi {
                format!("`{}` takes exactly {} object name(s), got {}", self.task.command, lo, n)
            } else if hi == usize::MAX {
                format!("`{}` takes at least {} object name(s), got {}", self.task.command, lo, n)
            } else {
                format!("`{}` takes {}..={} object names, got {}", self.task.command, lo, hi, n)
            });
        }
        Ok(())
    }

    fn need_two_vars(&self) -> Result<(), String> {
        if self.inst.d() != 2 {
            return Err(format!("`{}` requires a 2-variable ring", self.task.command));
        }
        Ok(())
    }

    /// Per-axis window: --window if given (length-checked), else the default.
    fn window(&self, default: Vec<usize>) -> Result<Vec<usize>, String> {
        match &self.cfg.window {
            None => Ok(default),
            Some(w) => {
                if w.len() != default.len() {
                    return Err(format!(
                        "--window needs {} entries for this task, got {}",
                        default.len(),
                        w.len()
                    ));
                }
                Ok(w.clone())
            }
        }
    }

    fn instance_label(&self) -> String {
        self.task.args.join(", ")
    }
}

pub fn execute_task(inst: &Instance, task: &Task, cfg: &RunConfig) -> TaskReport {
    let ctx = Ctx { inst, task, cfg, bounds: cfg.bounds() };
    match dispatch(&ctx) {
        Ok(r) => r,
        Err(DispatchError::Input(msg)) => input_error(task, msg),
        Err(DispatchError::Kernel(e)) => error_report(task, e),
    }
}

enum DispatchError {
    Input(String),
    Kernel(Error),
}

impl From<String> for DispatchError {
    fn from(m: String) -> Self {
        DispatchError::Input(m)
    }
}

impl From<Error> for DispatchError {
    fn from(e: Error) -> Self {
        DispatchError::Kernel(e)
    }
}

fn dispatch(ctx: &Ctx) -> Result<TaskReport, DispatchError> {
    let task = ctx.task;
    let b = ctx.bounds;
    let seed = ctx.cfg.seed;
    Ok(match task.command.as_str() {
        "colength" => {
            ctx.arity(1, 1)?;
            let m = ctx.inst.module(&task.args[0])?;
            let colength = m.colength(b.s_max)?;
            let s = m.cert_exponent(b.s_max)?;
            report(
                json!({
                    "task": "colength",
                    "object": task.args[0],
                    "colength": colength,
                    "certificates": {"s": s, "s_max": b.s_max},
                }),
                TaskStatus::Pass,
            )
        }
        "closure" => {
            ctx.arity(1, 1)?;
            ctx.need_two_vars()?;
            let i = ctx.inst.ideal(&task.args[0])?;
            let closed = is_integrally_closed_monomial(&i, b.s_max)?;
            let closure = monomial_closure(&i, b.s_max)?;
            let gens: Vec<String> = closure.gens().iter().map(|g| ctx.inst.format_poly(g)).collect();
            report(
                json!({
                    "task": "closure",
                    "ideal": task.args[0],
                    "closed": closed,
                    "closure": gens,
                    "certificates": {"s_max": b.s_max},
                }),
                TaskStatus::Pass,
            )
        }
        "contracted" => {
            ctx.arity(1, 1)?;
            let m = ctx.inst.module(&task.args[0])?;
            let ord = m.ord().ok_or(Error::NotFiniteColength { s_max: b.s_max })?;
            let mu = m.min_generators(b.s_max)?;
            let equal = contracted_numerical_test(&m, b.s_max)?;
            report(
                json!({
                    "task": "contracted",
                    "theorem": "numerical-contractedness",
                    "instance": ctx.instance_label(),
                    "mu": mu,
                    "ord": ord,
                    "rank": m.ambient_rank(),
                    "equal": equal,
                    "certificates": {"s_max": b.s_max},
                }),
                pass_fail(equal),
            )
        }
        "koszul-chi" => {
            ctx.arity(1, usize::MAX)?;
            let phis = task
                .args
                .iter()
                .map(|a| ctx.inst.endo(a))
                .collect::<Result<Vec<_>, _>>()?;
            let cmp = verify_comparison(&phis, b)?;
            report(
                json!({
                    "task": "koszul-chi",
                    "theorem": "euler-characteristic-comparison",
                    "instance": ctx.instance_label(),
                    "h0": cmp.h0,
                    "det_colength": cmp.det_colength,
                    "equal": cmp.equal,
                    "certificates": {"s_max": b.s_max},
                }),
                pass_fail(cmp.equal),
            )
        }
        "brtable" => {
            ctx.arity(1, usize::MAX)?;
            let ms = ctx.modules()?;
            let window = ctx.window(ms.iter().map(|m| m.ambient_rank() + 3).collect())?;
            let table = br_table(&ms, &window, b)?;
            if ctx.cfg.csv {
                TaskReport { text: table.to_csv(), status: TaskStatus::Pass }
            } else {
                report(
                    json!({
                        "task": "brtable",
                        "modules": task.args,
                        "window": window,
                        "ranks": table.ranks,
                        "values": table.values,
                        "certificates": {"s_max": b.s_max},
                    }),
                    TaskStatus::Pass,
                )
            }
        }
        "mu-table" => {
            ctx.arity(1, usize::MAX)?;
            let ms = ctx.modules()?;
            let t = mu_table(&ms, b.n_max, b)?;
            report(
                json!({
                    "task": "mu-table",
                    "modules": task.args,
                    "values": t.values,
                    "fitted_degree": t.fitted_degree,
                    "certificates": {"n_max": b.n_max, "s_max": b.s_max},
                }),
                TaskStatus::Pass,
            )
        }
        "mixed-br" => {
            ctx.arity(1, usize::MAX)?;
            let ms = ctx.modules()?;
            let window = ctx.window(ms.iter().map(|m| m.ambient_rank() + 3).collect())?;
            let mb = mixed_br(&ms, &window, b)?;
            report(
                json!({
                    "task": "mixed-br",
                    "modules": task.args,
                    "value": mb.value,
                    "stabilized": mb.stabilized,
                    "window": window,
                    "certificates": {"s_max": b.s_max},
                }),
                if mb.stabilized { TaskStatus::Pass } else { TaskStatus::Indeterminate },
            )
        }
        "degree-check" => {
            ctx.arity(1, usize::MAX)?;
            let ms = ctx.modules()?;
            let rank_sum: usize = ms.iter().map(Submodule::ambient_rank).sum();
            let degree = ctx.inst.d() + rank_sum - ms.len();
            let window = ctx.window(vec![degree + 1; ms.len()])?;
            let table = br_table(&ms, &window, b)?;
            let confirmed = degree_check(&table)?;
            report(
                json!({
                    "task": "degree-check",
                    "theorem": "length-polynomial-total-degree",
                    "instance": ctx.instance_label(),
                    "expected_degree": degree,
                    "equal": confirmed,
                    "window": window,
                    "certificates": {"s_max": b.s_max},
                }),
                pass_fail(confirmed),
            )
        }
        "jrn" => {
            ctx.arity(1, usize::MAX)?;
            let ms = ctx.modules()?;
            let cand = JointReduction::random_candidate(&ms, seed);
            let jrn = joint_reduction_number(&ms, &cand, b)?;
            let free = freeness_and_minimality_check(&ms, &cand, b)?;
            report(
                json!({
                    "task": "jrn",
                    "instance": ctx.instance_label(),
                    "seed": seed,
                    "result": jrn,
                    "freeness": {
                        "det_nonzero": free.det_nonzero,
                        "extends_mingen": free.extends_mingen,
                    },
                    "certificates": {"n_max": b.n_max, "s_max": b.s_max},
                }),
                match jrn {
                    Jrn::Found { .. } => TaskStatus::Pass,
                    Jrn::NotFound { .. } => TaskStatus::Indeterminate,
                },
            )
        }
        "freeness" => {
            ctx.arity(1, usize::MAX)?;
            let ms = ctx.modules()?;
            let cand = JointReduction::random_candidate(&ms, seed);
            let free = freeness_and_minimality_check(&ms, &cand, b)?;
            let equal = free.det_nonzero.iter().all(|&x| x)
                && free.extends_mingen.iter().all(|&x| x);
            report(
                json!({
                    "task": "freeness",
                    "theorem": "joint-reduction-freeness-and-minimality",
                    "instance": ctx.instance_label(),
                    "seed": seed,
                    "det_nonzero": free.det_nonzero,
                    "extends_mingen": free.extends_mingen,
                    "equal": equal,
                    "certificates": {"s_max": b.s_max},
                }),
                pass_fail(equal),
            )
        }
        "verify-jrn0" => {
            ctx.arity(2, 2)?;
            let ms = ctx.modules()?;
            let r = verify_jrn0(&ms[0], &ms[1], seed, b)?;
            report(
                json!({
                    "task": "verify-jrn0",
                    "theorem": "joint-reduction-number-zero",
                    "instance": ctx.instance_label(),
                    "seed": seed,
                    "jrn": r.jrn,
                    "equal": r.holds,
                    "certificates": {"n_max": b.n_max, "s_max": b.s_max},
                }),
                pass_fail(r.holds),
            )
        }
        "verify-determinantal" => {
            ctx.arity(1, usize::MAX)?;
            let ms = ctx.modules()?;
            let cand = JointReduction::random_candidate(&ms, seed);
            let det = verify_determinantal(&ms, &cand, b)?;
            report(
                json!({
                    "task": "verify-determinantal",
                    "theorem": "determinantal-reduction-criterion",
                    "instance": ctx.instance_label(),
                    "seed": seed,
                    "equal": det.holds,
                    "witness_n": det.witness_n,
                    "certificates": {"n_max": b.n_max, "s_max": b.s_max},
                }),
                pass_fail(det.holds),
            )
        }
        "verify-equivalence" => {
            ctx.arity(1, usize::MAX)?;
            let ms = ctx.modules()?;
            let cand = JointReduction::random_candidate(&ms, seed);
            let jrn = joint_reduction_number(&ms, &cand, b)?;
            let det = verify_determinantal(&ms, &cand, b)?;
            let equational = matches!(jrn, Jrn::Found { .. });
            let equal = equational == det.holds;
            report(
                json!({
                    "task": "verify-equivalence",
                    "theorem": "equational-determinantal-equivalence",
                    "instance": ctx.instance_label(),
                    "seed": seed,
                    "equational": jrn,
                    "determinantal": det.holds,
                    "witness_n": det.witness_n,
                    "equal": equal,
                    "certificates": {"n_max": b.n_max, "s_max": b.s_max},
                }),
                pass_fail(equal),
            )
        }
        "mixed-mult" => {
            ctx.arity(2, 2)?;
            ctx.need_two_vars()?;
            let i = ctx.inst.ideal(&task.args[0])?;
            let j = ctx.inst.ideal(&task.args[1])?;
            let w = ctx.window(vec![3, 3])?;
            let r = mixed_mult_ideals(&i, &j, (w[0], w[1]), ctx.cfg.trials, seed, b)?;
            let status = if !r.stabilized || (ctx.cfg.trials > 0 && r.route_b.is_none()) {
                TaskStatus::Indeterminate
            } else if r.equal == Some(false) {
                TaskStatus::Fail
            } else {
                TaskStatus::Pass
            };
            report(
                json!({
                    "task": "mixed-mult",
                    "theorem": "mixed-multiplicity-two-routes",
                    "instance": ctx.instance_label(),
                    "seed": seed,
                    "value": r.route_a,
                    "route_a": r.route_a,
                    "route_b": r.route_b,
                    "equal": r.equal,
                    "stabilized": r.stabilized,
                    "window": [r.window.0, r.window.1],
                    "trials": r.trials,
                    "certificates": {"s_max": b.s_max},
                }),
                status,
            )
        }
        "verify-prodlength" => {
            ctx.arity(2, usize::MAX)?;
            ctx.need_two_vars()?;
            let ms = ctx.modules()?;
            let r = verify_prodlength(&ms, b)?;
            report(
                json!({
                    "task": "verify-prodlength",
                    "theorem": "product-colength-identity",
                    "instance": ctx.instance_label(),
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "equal": r.equal,
                    "certificates": {"s_max": b.s_max},
                }),
                pass_fail(r.equal),
            )
        }
        "verify-local" => {
            ctx.arity(2, 2)?;
            let ms = ctx.modules()?;
            let r = verify_local_identity(&ms[0], &ms[1], b)?;
            report(
                json!({
                    "task": "verify-local",
                    "theorem": "local-module-length-identity",
                    "instance": ctx.instance_label(),
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "orders": [r.orders.0, r.orders.1],
                    "equal": r.equal,
                    "certificates": {"s_max": b.s_max},
                }),
                pass_fail(r.equal),
            )
        }
        "verify-step1" => {
            ctx.arity(2, 2)?;
            let ms = ctx.modules()?;
            let cand = JointReduction::random_candidate(&ms, seed);
            let r = verify_step1(&ms[0], &ms[1], &cand, b)?;
            report(
                json!({
                    "task": "verify-step1",
                    "theorem": "reduction-step-length-identity",
                    "instance": ctx.instance_label(),
                    "seed": seed,
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "equal": r.equal,
                    "certificates": {"n_max": b.n_max, "s_max": b.s_max},
                }),
                pass_fail(r.equal),
            )
        }
        "verify-brpolya" => {
            ctx.arity(2, usize::MAX)?;
            ctx.need_two_vars()?;
            let ms = ctx.modules()?;
            let window = ctx.window(vec![2; ms.len()])?;
            let r = verify_brpolya(&ms, &window, b)?;
            report(
                json!({
                    "task": "verify-brpolya",
                    "theorem": "joint-length-closed-form",
                    "instance": ctx.instance_label(),
                    "max_abs_deviation": r.max_abs_deviation,
                    "brs": r.brs,
                    "colengths": r.colengths,
                    "mixed": r.mixed,
                    "window": r.window,
                    "equal": r.equal,
                    "certificates": {"s_max": b.s_max},
                }),
                pass_fail(r.equal),
            )
        }
        "verify-minors" => {
            ctx.arity(2, 2)?;
            let ms = ctx.modules()?;
            let equal = minors_multiplicativity_check(&ms[0], &ms[1], b)?;
            report(
                json!({
                    "task": "verify-minors",
                    "theorem": "minor-ideal-multiplicativity",
                    "instance": ctx.instance_label(),
                    "equal": equal,
                    "certificates": {"s_max": b.s_max},
                }),
                pass_fail(equal),
            )
        }
        other => {
            return Err(DispatchError::Input(format!("unknown command `{other}`")));
        }
    })
}
