from .routes import analysis, catalog, health


def add_app_routes(app):
    app.include_router(health.router, prefix="/health", tags=["Health"])
    app.include_router(catalog.router, prefix="/catalog", tags=["Catalog"])
    app.include_router(analysis.router, prefix="/analysis", tags=["Analysis"])
