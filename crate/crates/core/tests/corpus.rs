use std::fs;
use std::path::PathBuf;

use parwidth::rational::q;
use parwidth::{
    optimal_matching, optimal_maxsat, parse_bipartite, parse_wcnf, serialize_bipartite, serialize_wcnf, BipartiteFormat,
};

fn corpus() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

#[test]
fn every_file_round_trips() {
    let files = corpus();
    assert!(files.len() >= 20);
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        if path.extension().is_some_and(|e| e == "wcnf") {
            let inst = parse_wcnf(&text).unwrap();
            let again = serialize_wcnf(&inst).unwrap();
            assert_eq!(parse_wcnf(&again).unwrap(), inst, "{}", path.display());
            assert_eq!(again, text, "{}", path.display());
        } else {
            let g = parse_bipartite(&text).unwrap();
            for layout in [BipartiteFormat::Matrix, BipartiteFormat::Record] {
                assert_eq!(
                    parse_bipartite(&serialize_bipartite(&g, layout)).unwrap(),
                    g,
                    "{}",
                    path.display()
                );
            }
        }
    }
}

#[test]
fn structured_files_have_known_optima() {
    let read = |name: &str| {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/corpus")
            .join(name);
        fs::read_to_string(path).unwrap()
    };
    for (name, opt) in [
        ("rand_hard_2.txt", 4),
        ("rand_hard_3.txt", 6),
        ("rand_hard_5.txt", 10),
        ("upper_triangular_6.txt", 6),
        ("complete_3x4.txt", 3),
        ("prio_one_rand.txt", 3),
        ("prio_one_rand_records.txt", 3),
    ] {
        assert_eq!(
            optimal_matching(&parse_bipartite(&read(name)).unwrap()).0,
            opt,
            "{name}"
        );
    }
    assert_eq!(
        parse_bipartite(&read("prio_one_rand.txt")).unwrap(),
        parse_bipartite(&read("prio_one_rand_records.txt")).unwrap()
    );
    assert_eq!(
        optimal_maxsat(&parse_wcnf(&read("width2_p2.wcnf")).unwrap()).unwrap().0,
        q(5, 2)
    );
    assert_eq!(
        optimal_maxsat(&parse_wcnf(&read("width2_p1.wcnf")).unwrap()).unwrap().0,
        q(2, 1)
    );
}

#[test]
fn malformed_text_reports_a_position() {
    let err = parse_bipartite("n_online 2\nn_offline 2\n0: 0 7\n").unwrap_err();
    assert!(
        matches!(
            err,
            parwidth::Error::Parse { line: 3, .. } | parwidth::Error::Malformed(_)
        ),
        "{err:?}"
    );
    let err = parse_wcnf("p wcnf 2 1\n1 x 0\n").unwrap_err();
    assert!(matches!(err, parwidth::Error::Parse { line: 2, .. }), "{err:?}");
}
