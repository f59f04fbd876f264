int ranwire_placeholder_test_train;
