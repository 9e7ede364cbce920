"""starx: the X and *X sequent term calculi."""
