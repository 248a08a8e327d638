macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $name() {
            $name::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(grassmann_algebra, "grassmann_algebra.rs");
example!(root_system, "root_system.rs");
example!(chevalley_basis, "chevalley_basis.rs");
example!(multiset_sums, "multiset_sums.rs");
example!(pbw_oracle, "pbw_oracle.rs");
example!(straightening_identities, "straightening_identities.rs");
example!(rewrite_to_basis, "rewrite_to_basis.rs");
example!(triangular_decomposition, "triangular_decomposition.rs");
example!(fault_injection, "fault_injection.rs");
example!(cartan_polynomials, "cartan_polynomials.rs");
example!(verification_campaign, "verification_campaign.rs");
