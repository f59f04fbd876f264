int ranwire_placeholder_test_tensor;
