//! Benchmarks live in `benches/`: state enumeration, characters and one relation check.
