# Moral Frames - Modules Package
