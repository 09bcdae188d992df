use knotforge_interp::{parse_line, Invocation};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn any_text_parses_or_reports_a_column(line in "\\PC{0,60}") {
        match parse_line(&line) {
            Ok(list) => prop_assert!(list.len() <= 10_000 * (line.len() + 1)),
            Err(e) => prop_assert!(e.column >= 1 && e.column <= line.chars().count() + 1, "{e} for {line:?}"),
        }
    }

    #[test]
    fn command_soup_parses_or_reports_a_column(line in "[a-z0-9 ;#<>=\"%.$-]{0,40}") {
        if let Ok(list) = parse_line(&line) {
            for inv in list {
                if let Invocation::Command { name, .. } = inv {
                    prop_assert!(!name.is_empty());
                }
            }
        }
    }
}
