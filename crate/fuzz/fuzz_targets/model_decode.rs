#![no_main]

use libfuzzer_sys::fuzz_target;

// The descriptor is attacker-controlled; sizes must be validated against the
// payload length before any tensor is allocated.
fuzz_target!(|data: &[u8]| {
    if let Ok(model) = agropomdp::neural::decode_model(data) {
        // Accepted input must re-encode to a stable canonical form. Byte
        // comparison, not PartialEq: the payload may contain NaN weights.
        let first = agropomdp::neural::encode_model(&model);
        let again = agropomdp::neural::decode_model(&first).expect("re-encode must round-trip");
        assert_eq!(first, agropomdp::neural::encode_model(&again));
    }
});
