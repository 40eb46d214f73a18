//! Randomized suites over the kernel, the coterm layer, the consequence
//! operator and proof search.

mod common;

use common::props;
use proptest::prelude::*;

const CASES: u32 = 500;

fn check(r: Result<(), String>) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn subject_reduction_under_whnf(seed in any::<u64>()) {
        check(props::subject_reduction(seed))?;
    }

    #[test]
    fn guarded_substitution_is_stable(seed in any::<u64>()) {
        check(props::guarded_substitution(seed))?;
    }

    #[test]
    fn guarded_terms_have_head_normal_forms(seed in any::<u64>()) {
        check(props::hnf_totality(seed))?;
    }

    #[test]
    fn kleisli_composition(seed in any::<u64>()) {
        check(props::kleisli_law(seed))?;
    }

    #[test]
    fn consequence_operator_is_monotone(seed in any::<u64>()) {
        check(props::phi_monotone(seed))?;
    }

    #[test]
    fn search_output_checks(seed in any::<u64>()) {
        check(props::search_checks(seed).map(|_| ()))?;
    }

    #[test]
    fn translations_check(seed in any::<u64>()) {
        check(props::translation_checks(seed).map(|_| ()))?;
    }
}
