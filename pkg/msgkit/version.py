VERSION = "1.0.0+20261018.1200"
