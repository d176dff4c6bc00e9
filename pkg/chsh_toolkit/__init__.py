__all__ = [
	"app",
]

__version__ = "1.0.0"
