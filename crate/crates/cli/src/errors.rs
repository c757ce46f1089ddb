use lssd_core::classical::ClassicalError;
use lssd_core::hypergraph::HypergraphError;

pub const PARSE: u8 = 2;
pub const BUDGET: u8 = 3;

fn classical(e: &ClassicalError) -> u8 {
    match e {
        ClassicalError::BudgetExceeded { .. } => BUDGET,
        _ => PARSE,
    }
}

/// 3 for exceeded budgets, 2 for every other input problem.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<ClassicalError>() {
            return classical(e);
        }
        if let Some(e) = cause.downcast_ref::<HypergraphError>() {
            return match e {
                HypergraphError::BudgetExceeded { .. } => BUDGET,
                HypergraphError::Classical(c) => classical(c),
                _ => PARSE,
            };
        }
    }
    PARSE
}
