#![no_main]

use libfuzzer_sys::fuzz_target;
use mcm_pathloss::AntennaCatalog;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(catalog) = AntennaCatalog::parse(text) {
        let again = AntennaCatalog::parse(&catalog.to_text()).expect("canonical dump parses");
        assert_eq!(again, catalog);
    }
});
