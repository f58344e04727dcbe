"""Figure scripts for mrsc experiment CSVs (one script per figure kind)."""
