//! Running a parsed script: declarations extend the signature, checks are
//! decided and their derivations validated.

use super::{validate_derivation, Checker, Derivation, KernelError, Signature};
use crate::syntax::parse::{Loc, Script, Statement};
use crate::syntax::print_judgement;
use std::rc::Rc;

#[derive(Debug)]
pub struct CheckOutcome {
    pub loc: Loc,
    /// What was checked, printed back in surface syntax.
    pub text: String,
    pub result: Result<Rc<Derivation>, KernelError>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

#[derive(Debug, Default)]
pub struct ScriptReport {
    pub signature: Signature,
    pub outcomes: Vec<CheckOutcome>,
    /// A declaration that failed; processing stops there.
    pub declaration_error: Option<(Loc, KernelError)>,
}

impl ScriptReport {
    pub fn all_passed(&self) -> bool {
        self.declaration_error.is_none() && self.outcomes.iter().all(CheckOutcome::passed)
    }
}

/// Runs every statement. With `keep_going == false` the run stops at the
/// first failed check.
pub fn run_script(script: &Script, keep_going: bool) -> ScriptReport {
    let mut report = ScriptReport::default();
    for st in &script.statements {
        match &st.item {
            Statement::Base { name, params } => {
                if let Err(e) = report.signature.declare_base(name, params.clone()) {
                    report.declaration_error = Some((st.loc, e));
                    return report;
                }
            }
            Statement::Const { name, ty } => {
                if let Err(e) = report.signature.declare_const(name, ty.clone()) {
                    report.declaration_error = Some((st.loc, e));
                    return report;
                }
            }
            Statement::Check { judgement, exch } => {
                let checker = Checker::new(&report.signature);
                let result = match exch {
                    Some(k) => checker.check_by_exchange(judgement, *k),
                    None => checker.check_judgement(judgement),
                }
                .and_then(|d| {
                    validate_derivation(&report.signature, &d)?;
                    Ok(d)
                });
                let failed = result.is_err();
                report.outcomes.push(CheckOutcome {
                    loc: st.loc,
                    text: print_judgement(judgement),
                    result,
                });
                if failed && !keep_going {
                    return report;
                }
            }
        }
    }
    report
}
