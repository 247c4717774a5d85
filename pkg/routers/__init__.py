"""API routers for the sharpbound service."""
