mod common;

use std::fs;

use common::corpus_file;
use mpdtsp::bench::{
    emit_csv, emit_svg_boxplots, emit_svg_histogram, run_corpus, summarize, to_csv_string, BenchError,
    ExperimentConfig, Heuristic, ResultRow, CSV_HEADER,
};
use mpdtsp::model::tour_cost;
use mpdtsp::generate::generate;
use mpdtsp::tsplib::parse_file;
use mpdtsp::GenerationSpec;

fn eil51_corpus() -> (tempfile::TempDir, ExperimentConfig) {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(corpus_file("eil51"), dir.path().join("eil51.tsp")).unwrap();
    fs::write(dir.path().join("broken.tsp"), "NAME: broken\nEDGE_WEIGHT_TYPE: GEO\nEOF\n").unwrap();
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let config = ExperimentConfig::new(dir.path());
    (dir, config)
}

fn strip_times(rows: &[ResultRow]) -> Vec<ResultRow> {
    rows.iter().cloned().map(|r| ResultRow { wall_time: 0.0, ..r }).collect()
}

#[test]
fn eil51_sweep_produces_twenty_ordered_rows() {
    let (_dir, config) = eil51_corpus();
    let run = run_corpus(&config).unwrap();
    assert_eq!(run.rows.len(), 20);
    assert_eq!(run.skipped.len(), 1);
    assert!(run.skipped[0].path.ends_with("broken.tsp"));

    let csv = to_csv_string(&run.rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 21);
    assert!(lines[1].starts_with("eil51,pickups-central,2,NNH,"));
    assert!(lines[2].starts_with("eil51,pickups-central,2,CIH,"));
    assert!(lines[20].starts_with("eil51,deliveries-central,10,CIH,"));

    let cloud = parse_file::<f64>(corpus_file("eil51")).unwrap();
    for row in &run.rows {
        let g = generate(&cloud, &GenerationSpec::new(row.direction, row.capacity)).unwrap();
        let tour = row.tour.as_ref().unwrap();
        assert_eq!(row.best_cost, Some(tour_cost(&g.instance, tour).unwrap()));
        assert_eq!(row.node_count, 51);
    }

    let again = run_corpus(&config).unwrap();
    assert_eq!(strip_times(&again.rows), strip_times(&run.rows));
}

#[test]
fn summary_and_artifacts() {
    let (dir, config) = eil51_corpus();
    let run = run_corpus(&config).unwrap();
    let summary = summarize(&run.rows).unwrap();
    assert_eq!(summary.overall.pairs, 10);
    assert_eq!(summary.per_direction.len(), 2);
    assert_eq!(summary.cost_ratio_by_capacity.len(), 5);

    let mut shuffled = run.rows.clone();
    shuffled.reverse();
    shuffled.swap(0, 7);
    assert_eq!(summarize(&shuffled).unwrap(), summary);

    let csv = dir.path().join("out.csv");
    emit_csv(&run.rows, &csv).unwrap();
    assert_eq!(fs::read_to_string(&csv).unwrap(), to_csv_string(&run.rows));
    let hist = dir.path().join("ratio.svg");
    emit_svg_histogram(&summary, &hist).unwrap();
    let boxes = dir.path().join("boxes.svg");
    emit_svg_boxplots(&summary, &boxes).unwrap();
    for path in [hist, boxes.clone(), dir.path().join("boxes-time.svg")] {
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"), "{}", path.display());
    }
    assert_eq!(fs::read_to_string(&boxes).unwrap().matches("<rect").count(), 5);

    let missing = dir.path().join("no/such/dir/out.csv");
    match emit_csv(&run.rows, &missing) {
        Err(BenchError::Io { path, .. }) => assert_eq!(path, missing),
        other => panic!("expected an I/O error, got {other:?}"),
    }
}

#[test]
fn empty_inputs() {
    assert_eq!(to_csv_string(&[]), format!("{CSV_HEADER}\n"));
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(run_corpus(&ExperimentConfig::new(dir.path())), Err(BenchError::NoInstances(_))));
    let s = summarize(&[]).unwrap();
    assert_eq!(s.overall.pairs, 0);
    assert!(s.max_reduction.is_none());
}

#[test]
fn oversized_files_are_skipped() {
    let (_dir, mut config) = eil51_corpus();
    config.max_nodes = Some(40);
    assert!(matches!(run_corpus(&config), Err(BenchError::NoInstances(_))));
    config.max_nodes = Some(51);
    config.capacities = vec![3];
    let run = run_corpus(&config).unwrap();
    assert_eq!(run.rows.len(), 4);
    assert!(run.rows.iter().all(|r| r.capacity == 3));
    assert_eq!(run.rows.iter().filter(|r| r.heuristic == Heuristic::Nnh).count(), 2);
}
