#![no_main]

use libfuzzer_sys::fuzz_target;
use simulag::tokenize;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let tokens = tokenize(text);
    // Tokens carry no whitespace, so joining and re-splitting is stable.
    for token in &tokens {
        assert!(!token.is_empty());
        assert!(!token.chars().any(char::is_whitespace));
    }
    assert_eq!(tokenize(&tokens.join(" ")), tokens);
});
