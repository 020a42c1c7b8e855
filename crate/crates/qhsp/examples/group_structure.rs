//! Tour of the finite abelian group layer: construction, subgroups,
//! structure computation, normal forms, duality.
//!
//! ```bash
//! cargo run --example group_structure
//! ```

use qhsp::groups::{
    build_generic_group, smith_normal_form, GenericGroupDescriptor, IntegerMatrix,
};
use qhsp::groups::AbelianGroup;

fn main() {
    // Z_8 x Z_4 x Z_2 in invariant-factor form
    let g = AbelianGroup::parse_descriptor("8,4,2").unwrap();
    println!("G = Z_{{{}}}, order {}", g.descriptor().replace(',', "} x Z_{"), g.order());

    let a = g.element(&[5, 3, 1]).unwrap();
    let b = g.element(&[6, 2, 1]).unwrap();
    println!("({a}) + ({b}) = {}", g.compose(&a, &b).unwrap());
    println!("-({a}) = {}", g.inverse(&a).unwrap());
    println!("order of ({a}) = {}", g.element_order(&a).unwrap());

    // subgroup generated by two elements, with its computed structure
    let h = g
        .subgroup(&[vec![2i64, 0, 0].into(), vec![0i64, 2, 0].into()])
        .unwrap();
    println!(
        "\nH = <(2,0,0), (0,2,0)>: order {}, structure {:?}",
        h.order(),
        h.structure()
    );
    println!("(4,2,0) in H? {}", h.contains(&g.element(&[4, 2, 0]).unwrap()).unwrap());
    println!("(1,0,0) in H? {}", h.contains(&g.element(&[1, 0, 0]).unwrap()).unwrap());

    // the annihilator and the duality law |H| * |H-perp| = |G|
    let perp = h.annihilator();
    println!(
        "|H| = {}, |H-perp| = {}, product = {} = |G|",
        h.order(),
        perp.order(),
        h.order() * perp.order()
    );
    println!("(H-perp)-perp == H? {}", perp.annihilator() == h);

    // canonical coset representatives separate cosets
    let x = g.element(&[5, 3, 1]).unwrap();
    println!(
        "coset representative of ({x})H = {}",
        h.coset_representative(&x).unwrap()
    );

    // discrete logarithm in a cyclic subgroup
    let z64 = AbelianGroup::cyclic(64).unwrap();
    let base = z64.element(&[3]).unwrap();
    let target = z64.scalar_mul(41, &base).unwrap();
    println!(
        "\ndlog_({base})({target}) in Z_64 = {}",
        z64.discrete_log(&base, &target).unwrap()
    );

    // Smith normal form of an integer matrix
    let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
    let snf = smith_normal_form(&m);
    println!("\nSmith diagonal of the demo matrix: {:?}", snf.diagonal());

    // the generic builder validates parameter co-dependencies
    let mut d = GenericGroupDescriptor::over_domain(12);
    d.user_generators = Some(vec![8]);
    let generic = build_generic_group(&d).unwrap();
    println!(
        "\ngeneric group over a 12-element domain, generated by 8: structure computed eagerly? {}",
        generic.structure_computed()
    );
    println!("first structural query -> Z_{}", generic.group().order());

    let mut bad = GenericGroupDescriptor::over_domain(12);
    bad.proper_subset = true;
    println!("under-specified proper subset -> {:?}", build_generic_group(&bad).err().unwrap());
}
