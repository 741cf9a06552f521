use spets::cyclotomic::Cyclo;
use spets::orders::order_polys;
use spets::tabledata::{load_group_data, load_reference};
use spets::uch::{check_hc_tuple, cyclic_uch, hc_candidate_filter, hc_datum_from_parabolic, z3_cuspidal_degree};

fn selected(group: &str, words: &[&str]) -> Vec<String> {
    let gd = load_group_data(group).unwrap();
    let r = load_reference(group).unwrap();
    let d = hc_datum_from_parabolic(&gd.g, words, z3_cuspidal_degree()).unwrap();
    let mut v: Vec<String> = hc_candidate_filter(&d, &order_polys(&gd.g).order_c, &r)
        .into_iter()
        .filter(|c| c.selected())
        .map(|c| r.chars[c.index].name.clone())
        .collect();
    v.sort();
    v
}

#[test]
fn z3_cuspidal_series() {
    assert_eq!(selected("G4", &["s"]), ["Z_3:11", "Z_3:2"]);
    assert_eq!(selected("G312", &["t"]), ["Z_3:1", "Z_3:zeta3", "Z_3:zeta3^2"]);
    // ⟨s⟩ in G(3,1,2) has order 2, the cuspidal datum does not live there
    assert!(selected("G312", &["s"]).is_empty());
}

#[test]
fn series_degrees_add_up() {
    for (g, w, rows) in [("G4", "s", vec!["Z_3:2", "Z_3:11"]), ("G312", "t", vec!["Z_3:1", "Z_3:zeta3", "Z_3:zeta3^2"])] {
        let gd = load_group_data(g).unwrap();
        let r = load_reference(g).unwrap();
        let d = hc_datum_from_parabolic(&gd.g, &[w], z3_cuspidal_degree()).unwrap();
        let order = order_polys(&gd.g).order_c;
        let tuple: Vec<_> = rows.iter().map(|n| (r.chars[r.position(n).unwrap()].degree.clone(), 1)).collect();
        assert!(check_hc_tuple(&d, &order, &tuple), "{g}");
        let mut bad = tuple.clone();
        bad[0].0 = bad[0].0.scale(&Cyclo::from_int(2));
        assert!(!check_hc_tuple(&d, &order, &bad), "{g}");
        assert!(!check_hc_tuple(&d, &order, &tuple[1..]), "{g}");
    }
}

#[test]
fn trivial_levi_gives_the_principal_series() {
    // in Z_3, the torus with λ = 1: the principal rows and nothing else
    let gd = load_group_data("Z3").unwrap();
    let t = cyclic_uch(3);
    let d = hc_datum_from_parabolic(&gd.g, &[], spets::laurent::LaurentPoly::one()).unwrap();
    let order = order_polys(&gd.g).order_c;
    let picked: Vec<bool> = hc_candidate_filter(&d, &order, &t).iter().map(|c| c.selected()).collect();
    for (c, p) in t.chars.iter().zip(picked) {
        assert_eq!(p, c.principal.is_some(), "{}", c.name);
    }
    let tuple: Vec<_> = t.chars.iter().filter(|c| c.principal.is_some()).map(|c| (c.degree.clone(), 1)).collect();
    assert!(check_hc_tuple(&d, &order, &tuple));
}
