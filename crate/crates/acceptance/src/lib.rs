//! Empty on purpose; the acceptance run lives in `tests/acceptance.rs`.
