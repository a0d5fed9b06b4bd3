#![no_main]

use libfuzzer_sys::fuzz_target;
use njordan::config::parse_matrix_literal;

fuzz_target!(|data: &[u8]| {
    let Some((&dim, rest)) = data.split_first() else { return };
    let dim = usize::from(dim % 5) + 1;
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Ok(m) = parse_matrix_literal(text, dim) {
            assert_eq!(m.dim(), dim);
            assert!(m.is_finite());
        }
    }
});
