use std::collections::HashMap;

use spets::cyclotomic::Cyclo;
use spets::laurent::LaurentPoly;
use spets::tabledata::{diff_tables, load_group_data, load_reference};
use spets::uch::{
    adopt_reference, assign_families, construct, cyclic_series_eigenvalues, cyclic_uch, determine_parameters,
    ennola_extend, ennola_transform, principal_one_series, verify_axioms, GroupData, UchTable, UnipotentCharacter,
};
use spets::laurent::FracExpMonomial;
use spets::orders::order_polys;

fn e(n: u64, k: i64) -> Cyclo {
    Cyclo::root_of_unity(n, k)
}

fn built(group: &str) -> (GroupData, UchTable) {
    let gd = load_group_data(group).unwrap();
    let c = construct(&gd, &cyclic_series_eigenvalues(&gd)).unwrap();
    (gd, c.table)
}

#[test]
fn groups_reproduce_their_tables() {
    for g in ["G4", "G312"] {
        let (gd, mut t) = built(g);
        let r = load_reference(g).unwrap();
        adopt_reference(&mut t, &r);
        let d = diff_tables(&t, &r);
        assert!(d.is_empty(), "{g}: {d:?}");
        let rep = verify_axioms(&t, &gd.verify_context());
        assert!(rep.passed(), "{g}:\n{rep}");
    }
}

#[test]
fn cyclic_construction_matches_closed_form() {
    for k in 2..=6u64 {
        let gd = GroupData::cyclic(k).unwrap();
        let c = construct(&gd, &cyclic_series_eigenvalues(&gd)).unwrap();
        let r = cyclic_uch(k);
        let mut t = c.table;
        adopt_reference(&mut t, &r);
        assert!(diff_tables(&t, &r).is_empty(), "Z{k}");
    }
}

#[test]
fn g312_ennola_images() {
    let gd = load_group_data("G312").unwrap();
    let mut t = UchTable {
        group: "G312".into(),
        field: 3,
        order: order_polys(&gd.g).order_c,
        chars: principal_one_series(&gd).unwrap(),
    };
    let added = ennola_extend(&gd, &mut t);
    let r = load_reference("G312").unwrap();
    assert_eq!(added.len(), 5);
    for i in added {
        let c = &t.chars[i];
        let (j, _) = r.find_degree(&c.degree).unwrap_or_else(|| panic!("{} not in the table", c.name));
        assert_eq!(c.fr, r.chars[j].fr, "{} vs {}", c.name, r.chars[j].name);
    }
}

#[test]
fn ennola_is_a_signed_permutation_of_order_dividing_the_center() {
    for g in ["G4", "G312"] {
        let (gd, t) = built(g);
        for (_, z) in gd.g.center_scalars() {
            let perm = ennola_transform(&t, &z);
            assert!(perm.iter().all(|p| p.is_some()), "{g} at {z}");
            let mut seen: Vec<usize> = perm.iter().map(|p| p.unwrap().0).collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), t.chars.len());
            // composing with the inverse twist gives back every row
            let back = ennola_transform(&t, &z.inv().unwrap());
            for (i, p) in perm.iter().enumerate() {
                let (j, s) = p.unwrap();
                let (k, s2) = back[j].unwrap();
                assert_eq!((k, s * s2), (i, 1), "{g}");
            }
        }
    }
}

#[test]
fn cyclic_invariants() {
    for k in 2..=12u64 {
        let t = cyclic_uch(k);
        assert_eq!(t.chars.len() as u64, 1 + k * (k - 1) / 2);
        let order = &t.order;
        for c in &t.chars {
            assert!(c.degree.divides(order), "Z{k} {}", c.name);
            assert!(c.fr.scalar.is_root_of_unity());
        }
        // families: the trivial character alone, everything else together
        let mut sizes: Vec<usize> = t.families().iter().map(|f| f.members.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, t.chars.len() - 1], "Z{k}");
    }
}

#[test]
fn determined_series_are_stable() {
    let gd = load_group_data("G4").unwrap();
    let (_, full) = built("G4");
    let z = e(3, 1);
    let mut base = UchTable { chars: principal_one_series(&gd).unwrap(), ..full.clone() };
    ennola_extend(&gd, &mut base);
    let a = determine_parameters(&gd, &z, &base).unwrap();
    // with the whole table known the same algebra is found and nothing is new
    let b = determine_parameters(&gd, &z, &full).unwrap();
    assert_eq!(a.spec, b.spec);
    assert!(b.members.iter().all(|m| m.2.is_some()));
    assert_eq!(b.funnel[3], 1);
}

fn row(name: &str, degree: LaurentPoly, principal: bool) -> UnipotentCharacter {
    let mut c = UnipotentCharacter::new(name, degree, FracExpMonomial::one(), name.to_string());
    if principal {
        c.principal = Some(name.to_string());
    }
    c
}

#[test]
fn family_tie_is_broken_by_the_ennola_orbit() {
    // two blocks with the same (a, A); the extra row is the image of the
    // second block's member under x -> -x
    let x = LaurentPoly::x();
    let one = Cyclo::one();
    let b1 = &x * &LaurentPoly::linear(&Cyclo::from_int(-1));
    let b2 = &x * &LaurentPoly::linear(&one).scale(&Cyclo::from_int(2));
    let extra = b2.subs_scale(&Cyclo::from_int(-1));
    let mut t = UchTable {
        group: "T".into(),
        field: 1,
        order: LaurentPoly::one(),
        chars: vec![row("p", b1.clone(), true), row("q", b2.clone(), true), row("r", extra, false)],
    };
    let mut fegs = HashMap::new();
    fegs.insert("p".to_string(), x.clone());
    fegs.insert("q".to_string(), x.clone());
    let blocks = vec![vec!["p".to_string()], vec!["q".to_string()]];
    let fams = assign_families(&mut t, &blocks, &fegs, &[Cyclo::from_int(-1)]).unwrap();
    assert_eq!(fams.len(), 2);
    let fam_of = |n: &str| t.chars[t.position(n).unwrap()].family;
    assert_eq!(fam_of("r"), fam_of("q"));
    assert_ne!(fam_of("r"), fam_of("p"));

    // without the orbit the placement is ambiguous
    let mut t2 = t.clone();
    assert!(assign_families(&mut t2, &blocks, &fegs, &[]).is_err());
}
