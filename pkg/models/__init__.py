# Moral Frames - pydantic models for validated documents and configuration
