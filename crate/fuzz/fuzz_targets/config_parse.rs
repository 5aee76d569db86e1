#![no_main]

use libfuzzer_sys::fuzz_target;

use agropomdp::experiment::ExperimentConfig;

// Parsing is pure (no filesystem access), so arbitrary text is safe to feed
// straight through; accepted configs must survive a manifest round-trip.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = ExperimentConfig::from_text(text) {
            let meta = agropomdp::experiment::ManifestMeta::new(Vec::new());
            let rendered = config.manifest_text(&meta);
            let reparsed = ExperimentConfig::from_text(&rendered)
                .expect("a rendered manifest must parse back");
            assert_eq!(config, reparsed);
        }
    }
});
