use hypersym::fields::{Grid3, ProductRule};
use hypersym::forms4::CircleAxis;
use hypersym::generators::{fhy_triple, random_valid_triple, FhyCoefficients};
use hypersym::io::{component_names, load_triple, read_triple, save_triple, write_triple, Sidecar};

#[test]
fn save_load_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let t = random_valid_triple(8, Grid3::new(8).unwrap(), 0.6).unwrap();
    let path = dir.path().join("t.bin");
    let side = save_triple(&t, &path).unwrap();
    let back = load_triple(&path).unwrap();
    for (a, b) in t.omega().iter().zip(back.omega()) {
        for (x, y) in a.dtheta_part().unwrap().components().iter().zip(b.dtheta_part().unwrap().components()) {
            assert!(x.values().iter().zip(y.values()).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }
    assert_eq!(back, t);
    let s: Sidecar = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(s.components, component_names());
    assert_eq!(s.grid_n, 8);
}

#[test]
fn circle_axis_and_product_rule_survive() {
    let g = Grid3::new(6).unwrap().with_products(ProductRule::Dealiased);
    let axis = CircleAxis::new(2).unwrap();
    let t = fhy_triple(&FhyCoefficients::sine_perturbed(), g, axis).unwrap();
    let mut buf = Vec::new();
    write_triple(&t, &mut buf).unwrap();
    let back = read_triple(buf.as_slice()).unwrap();
    assert_eq!(back.circle_axis(), axis);
    assert_eq!(back.grid().products(), ProductRule::Dealiased);
}

#[test]
fn truncated_and_foreign_files_fail() {
    let t = random_valid_triple(0, Grid3::new(4).unwrap(), 0.2).unwrap();
    let mut buf = Vec::new();
    write_triple(&t, &mut buf).unwrap();
    assert!(read_triple(&buf[..20]).is_err());
    let mut wrong_version = buf.clone();
    wrong_version[8] = 9;
    assert!(read_triple(wrong_version.as_slice()).is_err());
    let mut wrong_axis = buf.clone();
    wrong_axis[16] = 7;
    assert!(read_triple(wrong_axis.as_slice()).is_err());
    assert!(read_triple(&b"{\"json\": true}"[..]).is_err());
}
