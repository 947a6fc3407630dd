use dolgachev::planecurves::{plane_h0, Cubics};
use dolgachev::surface::SurfaceModel;

fn divisor(m: &SurfaceModel, t: (i64, i64, i64, i64, i64, i64, i64)) -> dolgachev::surface::DivY {
    let (d, c7, c8, c9, e1, m2, m3) = t;
    let s = format!("{d}H - {c7}F1 - ... - {c7}F7 - {c8}F8 - {c9}F9 - {e1}E1 - {m2}E2 - {m3}E3");
    m.parse(&s).unwrap()
}

#[test]
fn step_seven_values() {
    let m = SurfaceModel::default_model();
    let c = Cubics::standard();
    let cases = [
        ((5, 1, 1, 1, 3, 2, 4), 0),
        ((14, 3, 3, 0, 8, 6, 11), 0),
        ((9, 2, 1, 0, 6, 3, 6), 0),
        ((9, 2, 2, 0, 5, 4, 7), 0),
        ((31, 7, 7, 1, 18, 11, 22), 0),
        ((26, 6, 5, 1, 14, 10, 20), 0),
        ((26, 6, 6, 0, 15, 9, 18), 0),
        ((17, 4, 4, 1, 9, 6, 12), 3),
        ((31, 7, 7, 1, 17, 12, 23), 6),
        ((26, 6, 5, 1, 15, 9, 18), 5),
        ((26, 6, 6, 0, 14, 10, 19), 5),
    ];
    for (t, want) in cases {
        let start = std::time::Instant::now();
        let r = plane_h0(&m, &divisor(&m, t), &c).unwrap();
        eprintln!("{t:?}: {} (expected {}, prime {:?}) in {:?}", r.dim, r.expected, r.certified_mod, start.elapsed());
        assert_eq!(r.dim, want, "{t:?}");
    }
}
