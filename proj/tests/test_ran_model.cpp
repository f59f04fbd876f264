int ranwire_placeholder_test_ran_model;
