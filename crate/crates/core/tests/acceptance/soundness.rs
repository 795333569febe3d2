use std::collections::HashSet;

use crate::common::holds_in_models;
use crate::{Outcome, Pool};

/// Every recorded rule instance and every pair found equal must agree in
/// chain2, chain3 and diamond under all admissible assignments.
pub fn check(pool: &Pool) -> Outcome {
    let mut seen = HashSet::new();
    let (mut checked, mut assignments, mut fails) = (0usize, 0usize, Vec::new());
    let mut vacuous = 0usize;
    for (ctx, l, r) in pool.rules.iter().chain(&pool.pairs) {
        let key = (ctx.presentation().to_json(), l.hash_id(), r.hash_id());
        if !seen.insert(key) {
            continue;
        }
        checked += 1;
        match holds_in_models(ctx, l, r) {
            Ok(0) => vacuous += 1,
            Ok(n) => assignments += n,
            Err(e) => fails.push(e),
        }
    }
    Outcome {
        pass: fails.is_empty() && checked > 0,
        detail: format!(
            "{checked} distinct equations ({} rule instances, {} equal pairs recorded), {assignments} assignments, {vacuous} with no admissible assignment, {} failures {:?}",
            pool.rules.len(),
            pool.pairs.len(),
            fails.len(),
            fails.first()
        ),
    }
}
