use proptest::prelude::*;
use stodom::lattice::Grid;
use stodom::percolation::label_clusters;

fn grid() -> impl Strategy<Value = Grid> {
    (2usize..10, 2usize..10).prop_flat_map(|(w, h)| {
        prop::collection::vec(0u8..=1, w * h).prop_map(move |cells| Grid::new(w, h, cells).unwrap())
    })
}

proptest! {
    #[test]
    fn transpose_swaps_crossings(g in grid()) {
        let a = label_clusters(&g).unwrap();
        let b = label_clusters(&g.transpose()).unwrap();
        prop_assert_eq!(a.clusters, b.clusters);
        prop_assert_eq!(a.horizontal_crossing, b.vertical_crossing);
        prop_assert_eq!(a.vertical_crossing, b.horizontal_crossing);
        prop_assert!((a.largest_fraction - b.largest_fraction).abs() < 1e-12);
    }

    #[test]
    fn opening_a_site_keeps_crossings(g in grid(), r in 0usize..10, c in 0usize..10) {
        let (r, c) = (r % g.height(), c % g.width());
        let mut more = g.clone();
        more.set(r, c, true);
        let a = label_clusters(&g).unwrap();
        let b = label_clusters(&more).unwrap();
        prop_assert!(!a.horizontal_crossing || b.horizontal_crossing);
        prop_assert!(!a.vertical_crossing || b.vertical_crossing);
        prop_assert!(b.largest_fraction >= a.largest_fraction);
    }
}
