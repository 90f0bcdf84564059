use sigma_lab::{sigma_exact, PrecisionPolicy};

fn table(from: u64, to: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let (f, t) = (from.to_string(), to.to_string());
    let args = ["sigma-lab", "table", "--from", &f, "--to", &t, "--format", "csv"];
    assert_eq!(sigma_lab_cli::run(args, &mut out, &mut err), 0);
    let mut rdr = csv::Reader::from_reader(out.as_slice());
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect()
}

#[test]
fn rows_agree_with_sigma_exact() {
    let p = PrecisionPolicy::default();
    let rows = table(1, 600);
    assert_eq!(rows.len(), 600);
    for (n, s) in rows {
        assert_eq!(s, sigma_exact(n, &p).unwrap().sigma, "n = {n}");
    }
}

#[test]
fn window_across_a_change_point() {
    let p = PrecisionPolicy::default();
    for (n, s) in table(3470, 3490) {
        assert_eq!(s, sigma_exact(n, &p).unwrap().sigma, "n = {n}");
    }
}

#[test]
fn bad_range_is_a_usage_error() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = sigma_lab_cli::run(["sigma-lab", "table", "--from", "9", "--to", "3"], &mut out, &mut err);
    assert_eq!(code, 2);
}
