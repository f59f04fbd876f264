int ranwire_placeholder_test_arch_dag;
