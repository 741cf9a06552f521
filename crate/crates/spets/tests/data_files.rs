use spets::tabledata::{
    diff_tables, emit_uch, load_group_data, parse_chartab, parse_uch, read_data, resolve_group,
    schur_data_from_reference, DiffKind,
};
use spets::uch::verify_axioms;

const TABLES: [&str; 5] = ["Z3-intro", "Z3", "Z4", "G4", "G312"];

fn group_of(table: &str) -> &str {
    table.split('-').next().unwrap()
}

#[test]
fn transcriptions_canonicalize_to_the_shipped_tables() {
    for name in TABLES {
        let raw = read_data(&format!("uch/transcribed/{name}.txt")).unwrap();
        let shipped = read_data(&format!("uch/{name}.uch")).unwrap();
        assert_eq!(emit_uch(&parse_uch(&raw).unwrap()), shipped, "{name}");
    }
}

#[test]
fn shipped_tables_round_trip() {
    for name in TABLES {
        let shipped = read_data(&format!("uch/{name}.uch")).unwrap();
        let t = parse_uch(&shipped).unwrap();
        assert_eq!(emit_uch(&t), shipped, "{name}");
        assert_eq!(emit_uch(&parse_uch(&emit_uch(&t)).unwrap()), shipped);
    }
}

#[test]
fn schur_files_regenerate_from_the_tables() {
    for g in ["G4", "G312"] {
        let cos = resolve_group(g).unwrap();
        let chars = parse_chartab(&read_data(&format!("chartab/{g}.tbl")).unwrap(), &cos).unwrap();
        let r = parse_uch(&read_data(&format!("uch/{g}.uch")).unwrap()).unwrap();
        let sd = schur_data_from_reference(&cos, &chars, &r).unwrap();
        assert_eq!(sd.emit(), read_data(&format!("schur/{g}.sch")).unwrap(), "{g}");
    }
}

#[test]
fn shipped_tables_satisfy_the_axioms() {
    for name in TABLES {
        let gd = load_group_data(group_of(name)).unwrap();
        let mut t = parse_uch(&read_data(&format!("uch/{name}.uch")).unwrap()).unwrap();
        let missing = gd.label_principal(&mut t).unwrap();
        assert!(missing.is_empty(), "{name}: {missing:?}");
        let rep = verify_axioms(&t, &gd.verify_context());
        assert!(rep.passed(), "{name}:\n{rep}");
    }
}

#[test]
fn diff_reports() {
    let r = parse_uch(&read_data("uch/G4.uch").unwrap()).unwrap();
    assert!(diff_tables(&r, &r).is_empty());

    // a flipped principal row is a sign error
    let mut t = r.clone();
    let i = t.position("phi3,2").unwrap();
    t.chars[i].degree = -&t.chars[i].degree;
    let d = diff_tables(&t, &r);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].kind, DiffKind::SignOnly);

    let mut t = r.clone();
    let i = t.position("G_4").unwrap();
    t.chars[i].name = "cusp".into();
    assert_eq!(diff_tables(&t, &r)[0].kind, DiffKind::Rename { reference: "G_4".into() });

    let mut t = r.clone();
    t.chars.retain(|c| c.name != "Z_3:2");
    let d = diff_tables(&t, &r);
    assert_eq!(d.len(), 1);
    assert_eq!((d[0].name.as_str(), &d[0].kind), ("Z_3:2", &DiffKind::Missing));

    // moving a row into another family breaks the family bijection
    let mut t = r.clone();
    let i = t.position("phi3,2").unwrap();
    let j = t.position("phi1,0").unwrap();
    t.chars[i].family = t.chars[j].family;
    assert!(diff_tables(&t, &r).iter().any(|e| e.kind == DiffKind::FamilyMismatch));
}

#[test]
fn flipped_principal_row_fails_the_axioms() {
    let gd = load_group_data("G4").unwrap();
    let mut t = parse_uch(&read_data("uch/G4.uch").unwrap()).unwrap();
    gd.label_principal(&mut t).unwrap();
    let i = t.position("phi3,2").unwrap();
    t.chars[i].degree = -&t.chars[i].degree;
    let rep = verify_axioms(&t, &gd.verify_context());
    assert!(!rep.passed());
    assert!(rep.failures().iter().any(|f| f.check == "U1(2)"));
}
