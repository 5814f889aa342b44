macro_rules! example_test {
    ($name:ident, $file:literal) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $name() {
            $name::run_example().expect("example should run");
        }
    };
}

example_test!(run_nsga2_dtlz2, "run_nsga2_dtlz2.rs");
example_test!(quality_indicators, "quality_indicators.rs");
example_test!(selection_record, "selection_record.rs");
example_test!(lineage_trace, "lineage_trace.rs");
example_test!(projection_layouts, "projection_layouts.rs");
example_test!(persist_and_reload, "persist_and_reload.rs");
example_test!(operator_inspection, "operator_inspection.rs");
