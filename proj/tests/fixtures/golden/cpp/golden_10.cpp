// Placeholder translation unit.

/* Nothing defined here yet. */
