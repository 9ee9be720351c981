"""Decision procedures for paraconsistent bi-relational Gödel modal logic."""
