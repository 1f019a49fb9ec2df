use std::time::Instant;
use tatecoh::builders::taft;
use tatecoh::field::FieldDescriptor;
use tatecoh::module::Engine;
use tatecoh::tate::TateEngine;

#[test]
fn smoke_taft3_free() {
    let c3 = FieldDescriptor::cyclotomic(3).unwrap();
    let th = taft(3, c3).unwrap();
    let mut eng = TateEngine::new(42);
    for d in [0i64, 1, -1, 2, -2] {
        let t0 = Instant::now();
        let a = eng.tate_hochschild(&th, d, d, Engine::Free).unwrap();
        println!("Taft3 HH free deg {d}: {:?} [{:?}]", a.dims, t0.elapsed());
    }
}
