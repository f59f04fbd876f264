int ranwire_placeholder_test_gnn_layers;
