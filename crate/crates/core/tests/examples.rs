// Runs the quick examples so they cannot rot.

mod prepare_timebin {
    include!("../examples/prepare_timebin.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod polarization_gate {
    include!("../examples/polarization_gate.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod dualrail_gate {
    include!("../examples/dualrail_gate.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod synthesize_any_unitary {
    include!("../examples/synthesize_any_unitary.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod loss_budget {
    include!("../examples/loss_budget.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod timing_and_thermal {
    include!("../examples/timing_and_thermal.rs");

    #[test]
    fn runs() {
        main();
    }
}
