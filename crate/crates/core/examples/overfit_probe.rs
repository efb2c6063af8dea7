use covertnet_core::dataset::{self, AdjacencyPolicy, OracleConfig};
use covertnet_core::gnn::{self, TrainConfig};

fn main() {
    let ds = {
        let ds = dataset::generate(200, 5, (1.0, 1.0), 42).unwrap();
        let mut cfg = OracleConfig::exact_default(42);
        cfg.adjacency_policy = AdjacencyPolicy::MstWithSelfLoops;
        dataset::label(ds, cfg).unwrap()
    };
    let split = dataset::split(&ds, 0.8, 42).unwrap();
    for (name, lr, epochs) in
        [("gcn2", 0.01, 30_000), ("gcn2", 0.003, 30_000), ("mlp", 0.01, 30_000), ("hybrid", 0.01, 20_000), ("gcn3", 0.01, 20_000)]
    {
        let spec = gnn::zoo_model(name).unwrap();
        let mut config = TrainConfig::new(epochs, lr, 5);
        config.adjacency_policy = AdjacencyPolicy::MstWithSelfLoops;
        let out = gnn::train_standalone(&spec, &ds, &split, &config).unwrap();
        let best = out.curve.iter().map(|r| r.test_mae).fold(f64::INFINITY, f64::min);
        print!("{name} lr{lr} x{epochs}: best_test={best:.4} |");
        for e in (0..epochs).step_by(epochs / 6).skip(1) {
            print!(" e{}={:.4}", e, out.curve[e].test_mae);
        }
        println!(" final={:.4}", out.curve.last().unwrap().test_mae);
    }
}
