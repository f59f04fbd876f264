int ranwire_placeholder_test_path_analysis;
