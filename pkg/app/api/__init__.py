# API Endpoints 