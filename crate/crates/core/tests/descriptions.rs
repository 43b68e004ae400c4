mod common;

use common::{catalog, terms_upto};
use spdesc::bits::Label;
use spdesc::closure::{is_closed, CellSource, ClosureEngine};
use spdesc::{
    forb_upto, generate_upto, is_suborder, member_topdown, synthesize, StructuralDescription,
};

fn described() -> Vec<StructuralDescription> {
    catalog().iter().map(|f| synthesize(f).unwrap()).collect()
}

#[test]
fn json_round_trip() {
    for d in described() {
        let json = d.to_json();
        let back = StructuralDescription::from_json(&json).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), json);
    }
}

#[test]
fn tables_validate_with_bounded_rank() {
    for d in described() {
        assert!(d.validate().is_valid());
        let ranks = d.ranks().unwrap();
        assert!(ranks.values().all(|&r| r <= d.entries().len()));
    }
}

#[test]
fn labels_strictly_decrease() {
    for d in described() {
        for entry in d.entries().values() {
            for bit in &entry.bits {
                assert_eq!(bit.point_count(), 2);
                for label in bit.labels() {
                    if let Label::IdealRef(key) = label {
                        let child = d.resolve(key).unwrap();
                        assert!(entry.ideal.strictly_contains(&child), "{} in {}", key, entry.ideal);
                    }
                }
            }
        }
    }
}

#[test]
fn synthesis_is_deterministic() {
    for f in catalog() {
        assert_eq!(synthesize(&f).unwrap().to_json(), synthesize(&f).unwrap().to_json());
    }
}

#[test]
fn closures_are_fixed_points() {
    for d in described() {
        for key in d.entries().keys() {
            let g = generate_upto(&d, key, 6).unwrap();
            assert!(is_closed(&d, key, &g).unwrap(), "{key}");
        }
    }
}

#[test]
fn topdown_agrees_with_closure() {
    for d in described() {
        let g = generate_upto(&d, d.root(), 8).unwrap();
        for p in terms_upto(8) {
            assert_eq!(member_topdown(&d, d.root(), p).unwrap(), g.contains(p), "{} {p}", d.root());
        }
    }
}

#[test]
fn closure_grows_with_the_bound() {
    for d in described() {
        for key in d.entries().keys() {
            let mut prev = generate_upto(&d, key, 0).unwrap();
            for n in 1..=7 {
                let next = generate_upto(&d, key, n).unwrap();
                assert!(prev.terms.is_subset(&next.terms));
                assert!(next.terms.iter().all(|t| t.size() <= n));
                prev = next;
            }
        }
    }
}

#[test]
fn recursive_cells_agree_with_obstruction_cells() {
    for d in described() {
        let direct = generate_upto(&d, d.root(), 7).unwrap();
        let mut engine = ClosureEngine::new(&d, 7, CellSource::Description).unwrap();
        assert_eq!(engine.generate(d.root()).unwrap(), direct, "{}", d.root());
    }
}

#[test]
fn direct_ideals_are_suborder_closed() {
    let small = terms_upto(6);
    for f in catalog() {
        let members = forb_upto(&f, 6).unwrap();
        for p in &members {
            for q in small {
                if is_suborder(q, p) {
                    assert!(members.contains(q), "{q} below {p}");
                }
            }
        }
    }
}
