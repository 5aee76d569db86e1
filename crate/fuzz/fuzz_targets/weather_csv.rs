#![no_main]

use libfuzzer_sys::fuzz_target;

// Any byte soup must come back as Ok or a categorized error, never a panic.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = agropomdp::weather::parse_weather_csv(text, "fuzz");
    }
});
